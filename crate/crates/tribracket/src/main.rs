fn main() -> std::process::ExitCode {
    tribracket::cli::run()
}
