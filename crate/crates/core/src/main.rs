fn main() {
    std::process::exit(htg_eval::cli::dispatch(std::env::args_os()));
}
