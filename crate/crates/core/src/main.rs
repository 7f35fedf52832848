fn main() -> std::process::ExitCode {
    tinyvox::cli::main()
}
