fn main() {
    std::process::exit(dqd_core::cli::cli_main(std::env::args_os()));
}
