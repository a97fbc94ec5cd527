/* tslint:disable */
/* eslint-disable */

/**
 * Escape probability `T` on a `size × size` grid over the scene's bounding box.
 */
export function coliseum(scene: string, p: number, size: number, depth: number): Uint8Array;

/**
 * Log-density image of a backward-orbit sample of the Julia set.
 */
export function julia(scene: string, points: number, size: number, seed: bigint): Uint8Array;

/**
 * Midpoints of the singular function on `n` equally spaced points of `[0, 1]`:
 * the Cantor function when `a` is not finite, Lebesgue's function with parameter `a` otherwise.
 */
export function staircase(a: number, n: number, depth: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly coliseum: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly julia: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly staircase: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
