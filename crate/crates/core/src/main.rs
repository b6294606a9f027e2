use std::process::ExitCode;

use log::LevelFilter;
use photon_phase::cli::{parse_args, rerun, run, Invocation};

fn main() -> ExitCode {
    env_logger::Builder::new().filter_level(LevelFilter::Warn).init();

    let invocation = match parse_args(std::env::args_os()) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match invocation {
        Invocation::Run(cfg) => run(&cfg),
        Invocation::Rerun { meta, out } => rerun(&meta, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
