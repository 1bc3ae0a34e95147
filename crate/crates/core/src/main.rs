fn main() {
    std::process::exit(sdp_recovery::cli::cli_main(std::env::args_os()));
}
