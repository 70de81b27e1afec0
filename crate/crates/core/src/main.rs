fn main() {
    std::process::exit(swarmcov::cli::main());
}
