use std::process::ExitCode;

fn main() -> ExitCode {
    freqbias::cli::main()
}
