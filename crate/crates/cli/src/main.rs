use std::io::Write;
use std::process::ExitCode;

use k3lat_cli::{run, CommandResult, Verdict};

fn write_out(r: &CommandResult) -> std::io::Result<()> {
    if let Some(path) = &r.out {
        let text = serde_json::to_string_pretty(&r.payload()).expect("payload serializes");
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut r = run(std::env::args_os());
    // A closed pipe downstream is not an error worth a panic.
    let mut stdout = std::io::stdout().lock();
    if let Some(text) = &r.display {
        let _ = write!(stdout, "{text}");
        return ExitCode::SUCCESS;
    }
    if let Err(e) = write_out(&r) {
        r.verdict = Verdict::Error;
        r.summary.push(format!("cannot write --out file: {e}"));
    }
    if r.json {
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&r.payload()).expect("payload serializes"));
    } else if r.verdict == Verdict::Error {
        for line in &r.summary {
            eprintln!("error: {}", line.trim_end());
        }
    } else {
        for line in &r.summary {
            let _ = writeln!(stdout, "{line}");
        }
    }
    let tag = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    if !r.json && r.verdict != Verdict::Error {
        let _ = writeln!(stdout, "{tag}");
    }
    eprintln!("elapsed: {} ms", r.elapsed_ms);
    ExitCode::from(r.exit_code() as u8)
}
