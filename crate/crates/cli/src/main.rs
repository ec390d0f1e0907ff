fn main() {
    std::process::exit(bqst::run(std::env::args_os()));
}
