fn main() {
    std::process::exit(casalvero_cli::parse_and_dispatch(std::env::args_os().skip(1)));
}
