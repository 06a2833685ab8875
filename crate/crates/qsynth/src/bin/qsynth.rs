fn main() {
    std::process::exit(qsynth::cli::main());
}
