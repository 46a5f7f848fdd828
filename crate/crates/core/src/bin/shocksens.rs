fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(shocksens::cli::run(std::env::args_os()))
}
