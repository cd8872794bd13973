fn main() {
    std::process::exit(morsept::main_with_args(std::env::args_os()));
}
