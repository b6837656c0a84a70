use clap::Parser;
use courantlab_cli::run::{run, RunOptions, COMMANDS};
use courantlab_cli::{fixtures, resolve_scene};

/// Exact verification of Courant-algebroid structures from scene files.
///
/// Exit codes: 0 all checks passed, 1 at least one check failed,
/// 2 input error (bad scene, unknown command or name, bad arguments).
#[derive(Parser)]
#[command(name = "courantlab", version, arg_required_else_help = true)]
struct Cli {
    /// Command to run (use --fixtures to list bundled scenes).
    #[arg(value_parser = COMMANDS.to_vec(), required_unless_present = "fixtures")]
    command: Option<String>,

    /// Scene: a JSON file path or a bundled fixture name.
    #[arg(required_unless_present = "fixtures")]
    scene: Option<String>,

    /// Command arguments (names declared in the scene, rationals, ...).
    #[arg(trailing_var_arg = true)]
    args: Vec<String>,

    /// Write the JSON report to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,

    /// Omit the timing field, making the report byte-reproducible.
    #[arg(long)]
    no_timing: bool,

    /// List the bundled fixture scenes and exit.
    #[arg(long)]
    fixtures: bool,

    /// Truncate witness arrays longer than N entries.
    #[arg(long, value_name = "N")]
    witness_limit: Option<usize>,
}

fn main() {
    let cli = Cli::parse();

    if cli.fixtures {
        for name in fixtures::names() {
            println!("{name}");
        }
        std::process::exit(0);
    }

    let (command, scene_arg) = (cli.command.unwrap(), cli.scene.unwrap());
    let scene = match resolve_scene(&scene_arg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };

    let opts = RunOptions { timing: !cli.no_timing, witness_limit: cli.witness_limit };
    let (report, all_passed) = match run(&command, &scene, &cli.args, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };

    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write `{path}`: {e}");
                std::process::exit(2);
            }
        }
        None => println!("{text}"),
    }

    std::process::exit(if all_passed { 0 } else { 1 });
}
