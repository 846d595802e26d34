fn main() {
    std::process::exit(evtlab_cli::run(std::env::args_os()));
}
