fn main() -> std::process::ExitCode {
    cornergrowth::cli::main_entry()
}
