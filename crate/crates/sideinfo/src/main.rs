fn main() {
    std::process::exit(sideinfo::cli::main_with(std::env::args_os()));
}
