fn main() -> std::process::ExitCode {
    paircorr::cli::run(std::env::args_os())
}
