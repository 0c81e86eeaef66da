use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use discsem::lexicon::Mode;
use discsem::script::{run_script, Format, ScriptOptions};
use discsem::{SelStrategy, Style};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Event,
    Baseline,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EmitArg {
    Fol,
    Term,
    Dot,
    Json,
    Trace,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    Unicode,
    Ascii,
}

/// Run a discourse script and print the resulting formulas.
#[derive(Debug, Parser)]
#[command(name = "discsem", version)]
struct Args {
    /// Script file to run.
    script: PathBuf,
    /// Override the script's `mode` statement.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Evaluate Sel and Del against the discourse graph.
    #[arg(long)]
    resolve: bool,
    /// After the script, print the last discourse in this format.
    #[arg(long, value_enum)]
    emit: Option<EmitArg>,
    #[arg(long, value_enum, default_value = "unicode")]
    style: StyleArg,
    /// Antecedent selection: `most-recent` or `target=<event>`.
    #[arg(long, default_value = "most-recent", value_parser = parse_sel)]
    sel: SelStrategy,
}

fn parse_sel(s: &str) -> Result<SelStrategy, String> {
    match s {
        "most-recent" => Ok(SelStrategy::MostRecent),
        _ => match s.strip_prefix("target=") {
            Some(label) if !label.is_empty() => Ok(SelStrategy::FixedTarget(label.to_string())),
            _ => Err(format!(
                "expected `most-recent` or `target=<event>`, got `{s}`"
            )),
        },
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("discsem: {}: {e}", args.script.display());
            return ExitCode::from(1);
        }
    };
    let opts = ScriptOptions {
        mode: args.mode.map(|m| match m {
            ModeArg::Event => Mode::Event,
            ModeArg::Baseline => Mode::Baseline,
        }),
        resolve: args.resolve,
        emit: args.emit.map(|e| match e {
            EmitArg::Fol => Format::Fol,
            EmitArg::Term => Format::Term,
            EmitArg::Dot => Format::Dot,
            EmitArg::Json => Format::Json,
            EmitArg::Trace => Format::Trace,
        }),
        style: match args.style {
            StyleArg::Unicode => Style::Unicode,
            StyleArg::Ascii => Style::Ascii,
        },
        sel: args.sel,
        base_dir: args
            .script
            .parent()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    let run = run_script(&text, &opts);
    print!("{}", run.stdout);
    match run.error {
        None => ExitCode::SUCCESS,
        Some(err) => {
            eprintln!("discsem: {}: {err}", args.script.display());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
