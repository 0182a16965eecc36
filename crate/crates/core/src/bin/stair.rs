fn main() -> std::process::ExitCode {
    stair::cli::main()
}
