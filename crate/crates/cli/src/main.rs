fn main() {
    std::process::exit(pivotlab_cli::run(std::env::args_os()));
}
