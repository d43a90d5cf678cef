fn main() {
    std::process::exit(codecheck::cli::main_from_env());
}
