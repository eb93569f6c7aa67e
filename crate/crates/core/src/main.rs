fn main() {
    std::process::exit(ftsurf::cli::dispatch(std::env::args_os()));
}
