fn main() {
    std::process::exit(sshcav::cli::main_with_args(std::env::args_os()));
}
