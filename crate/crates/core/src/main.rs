fn main() -> std::process::ExitCode {
    randdyn::cli::main()
}
