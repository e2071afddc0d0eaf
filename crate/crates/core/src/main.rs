fn main() {
    std::process::exit(dwradius::cli::main());
}
