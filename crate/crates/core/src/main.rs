fn main() {
    std::process::exit(nonclassicality::cli::run(std::env::args_os()));
}
