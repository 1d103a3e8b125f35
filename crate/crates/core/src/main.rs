fn main() {
    std::process::exit(semistiff::cli::dispatch(std::env::args_os()));
}
