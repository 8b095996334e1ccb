fn main() {
    std::process::exit(thickmix::cli::run(std::env::args_os()));
}
