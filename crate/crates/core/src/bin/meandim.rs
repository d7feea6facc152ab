fn main() {
    std::process::exit(meandim::cli::main_with_args(std::env::args_os()));
}
