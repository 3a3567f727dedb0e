fn main() {
    std::process::exit(sonarforge_cli::run(std::env::args_os()));
}
