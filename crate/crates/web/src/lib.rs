//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Images come back as RGBA bytes ready for `ImageData`, row 0 at the top.

use randdyn::iteration::{julia_backward_cloud, DEFAULT_BURN_IN};
use randdyn::markov::t_raster;
use randdyn::scene::Scene;
use randdyn::staircase::{devils_staircase, lebesgue_singular};
use randdyn::{RandomModel, Result};
use wasm_bindgen::prelude::*;

fn js_err(e: randdyn::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Shipped scene by name, with the first weight replaced by `p` when the scene has two maps.
fn scene_model(name: &str, p: f64) -> Result<(Scene, RandomModel)> {
    let scene = Scene::resolve(name)?;
    let model = scene.model()?;
    if model.system().len() != 2 {
        return Ok((scene, model));
    }
    let model = RandomModel::new(model.system().clone(), vec![p, 1.0 - p])?;
    Ok((scene, model))
}

fn gray_to_rgba(gray: impl Iterator<Item = u8>) -> Vec<u8> {
    gray.flat_map(|g| [g, g, g, 255]).collect()
}

/// Escape probability `T` on a `size × size` grid over the scene's bounding box.
#[wasm_bindgen]
pub fn coliseum(scene: &str, p: f64, size: usize, depth: usize) -> std::result::Result<Vec<u8>, JsError> {
    let (scene, model) = scene_model(scene, p).map_err(js_err)?;
    let params = scene.params_with_depth(&model, depth).map_err(js_err)?;
    let bbox = scene.bbox().map_err(js_err)?;
    let raster = t_raster(&model, &params, bbox, size, size, depth).map_err(js_err)?;
    Ok(gray_to_rgba(raster.cells.iter().map(|c| (c.mid().clamp(0.0, 1.0) * 255.0).round() as u8)))
}

/// Log-density image of a backward-orbit sample of the Julia set.
#[wasm_bindgen]
pub fn julia(scene: &str, points: usize, size: usize, seed: u64) -> std::result::Result<Vec<u8>, JsError> {
    let (scene, model) = scene_model(scene, 0.5).map_err(js_err)?;
    let cloud = julia_backward_cloud(model.system(), points, DEFAULT_BURN_IN, seed).map_err(js_err)?;
    let bbox = scene.bbox().map_err(js_err)?;
    let gray = randdyn::io::cloud_graymap(&cloud, bbox, size, size);
    Ok(gray_to_rgba(gray.iter().map(|&g| 255 - (g >> 8) as u8)))
}

/// Midpoints of the singular function on `n` equally spaced points of `[0, 1]`:
/// the Cantor function when `a` is not finite, Lebesgue's function with parameter `a` otherwise.
#[wasm_bindgen]
pub fn staircase(a: f64, n: usize, depth: usize) -> std::result::Result<Vec<f64>, JsError> {
    let step = 1.0 / (n.max(2) - 1) as f64;
    (0..n.max(2))
        .map(|k| {
            let x = k as f64 * step;
            if a.is_finite() {
                lebesgue_singular(x, a, depth).map(|v| v.mid()).map_err(js_err)
            } else {
                Ok(devils_staircase(x, depth).mid())
            }
        })
        .collect()
}
