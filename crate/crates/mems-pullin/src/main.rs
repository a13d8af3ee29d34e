fn main() {
    std::process::exit(mems_pullin::cli::run());
}
