fn main() { std::process::exit(gaborscan::cli::parse_and_dispatch(std::env::args())) }
