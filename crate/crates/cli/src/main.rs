fn main() {
    std::process::exit(mixpart_cli::run(std::env::args_os()));
}
