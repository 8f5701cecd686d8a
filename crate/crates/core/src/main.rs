fn main() {
    std::process::exit(riesz_lab::cli::run(std::env::args_os()));
}
