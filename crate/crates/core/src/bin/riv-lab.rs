fn main() -> std::process::ExitCode {
    riv_lab::cli::main()
}
