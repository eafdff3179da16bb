fn main() {
    std::process::exit(teamfit::cli::run(std::env::args_os()));
}
