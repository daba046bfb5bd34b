fn main() {
    std::process::exit(maxineq::run(std::env::args_os()));
}
