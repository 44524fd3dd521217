fn main() {
    std::process::exit(datafarm_cli::dispatch(std::env::args_os()));
}
