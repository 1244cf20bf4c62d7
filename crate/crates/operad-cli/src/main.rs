//! Command-line driver for shuffle-operad Groebner basis computations.
//!
//! Exit status: 0 on success, 1 on a mathematical negative (a set that is
//! not a basis, a PBW refusal), 2 on usage or parse errors.

use std::process::ExitCode;

use operad::dsl;
use operad::order::{OrderConfig, PermMode, WordMode};
use operad::Rat;

use operad_cli::report::{cmd_complete, cmd_dims, cmd_is_gb, cmd_is_pbw, cmd_nf, cmd_show, RunConfig};

const USAGE: &str = "usage: operad <command> <file> [options]

commands:
  complete <file>        compute a Groebner basis up to the degree cap
  is-gb <file>           test whether the relations already form a basis
  is-pbw <file>          complete, then certify a quadratic (PBW) basis
  dims <file> --up-to N  dimensions of the quotient components
  nf <file> <element>    normal form of an element modulo the completed basis
  show <file>            parse and print the expanded shuffle presentation

options:
  --order path-lex|forest-lex    override the file's order family
  --word-mode deglex|lex|revdeglex
  --perm-mode revlex|lex
  --root-first                   forest-lex variant
  --cap N                        degree cap (default: 2*max relation degree + 2)
  --up-to N                      largest arity for dims (default 6)
  --monomials                    list normal monomials with dims
  --json                         structured output with stable key order

environment:
  OPERAD_THREADS                 worker count cap (0 or unset = auto)";

struct Args {
    command: String,
    file: String,
    element: Option<String>,
    json: bool,
    cfg: RunConfig,
    order_override: OrderOverride,
}

#[derive(Default)]
struct OrderOverride {
    kind: Option<String>,
    word_mode: Option<WordMode>,
    perm_mode: Option<PermMode>,
    root_first: bool,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("{USAGE}");
    ExitCode::from(2)
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    if argv.is_empty() {
        return Err("missing command".into());
    }
    let command = argv[0].clone();
    let known = ["complete", "is-gb", "is-pbw", "dims", "nf", "show"];
    if !known.contains(&command.as_str()) {
        return Err(format!("unknown command `{command}`"));
    }
    let mut file = None;
    let mut element = None;
    let mut json = false;
    let mut cap = None;
    let mut up_to = 6u32;
    let mut monomials = false;
    let mut over = OrderOverride::default();
    let mut it = argv[1..].iter().peekable();
    let value_of = |it: &mut std::iter::Peekable<std::slice::Iter<String>>,
                    flag: &str|
     -> Result<String, String> {
        it.next()
            .cloned()
            .ok_or_else(|| format!("{flag} needs a value"))
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => json = true,
            "--monomials" => monomials = true,
            "--root-first" => over.root_first = true,
            "--cap" => {
                let v = value_of(&mut it, "--cap")?;
                cap = Some(v.parse().map_err(|_| format!("bad --cap value `{v}`"))?);
            }
            "--up-to" => {
                let v = value_of(&mut it, "--up-to")?;
                up_to = v.parse().map_err(|_| format!("bad --up-to value `{v}`"))?;
                if up_to < 1 {
                    return Err("--up-to must be at least 1".into());
                }
            }
            "--order" => {
                let v = value_of(&mut it, "--order")?;
                if v != "path-lex" && v != "forest-lex" {
                    return Err(format!("bad --order value `{v}`"));
                }
                over.kind = Some(v);
            }
            "--word-mode" => {
                over.word_mode = Some(match value_of(&mut it, "--word-mode")?.as_str() {
                    "deglex" => WordMode::DegLex,
                    "lex" => WordMode::Lex,
                    "revdeglex" => WordMode::RevDegLex,
                    v => return Err(format!("bad --word-mode value `{v}`")),
                });
            }
            "--perm-mode" => {
                over.perm_mode = Some(match value_of(&mut it, "--perm-mode")?.as_str() {
                    "revlex" => PermMode::RevLex,
                    "lex" => PermMode::Lex,
                    v => return Err(format!("bad --perm-mode value `{v}`")),
                });
            }
            other if other.starts_with("--") => {
                return Err(format!("unknown option `{other}`"));
            }
            other => {
                if file.is_none() {
                    file = Some(other.to_string());
                } else if command == "nf" && element.is_none() {
                    element = Some(other.to_string());
                } else {
                    return Err(format!("unexpected argument `{other}`"));
                }
            }
        }
    }
    let file = file.ok_or("missing presentation file")?;
    if command == "nf" && element.is_none() {
        return Err("nf needs an element argument".into());
    }
    let threads = match std::env::var("OPERAD_THREADS") {
        Err(_) => 0,
        Ok(v) => v
            .parse()
            .map_err(|_| format!("OPERAD_THREADS must be a number, got `{v}`"))?,
    };
    Ok(Args {
        command,
        file,
        element,
        json,
        cfg: RunConfig {
            cap,
            threads,
            up_to,
            monomials,
        },
        order_override: over,
    })
}

fn apply_order_override(base: OrderConfig, over: &OrderOverride) -> OrderConfig {
    let kind = match (&over.kind, base) {
        (Some(k), _) => k.clone(),
        (None, OrderConfig::PathLex { .. }) => "path-lex".to_string(),
        (None, OrderConfig::ForestLex { .. }) => "forest-lex".to_string(),
    };
    if kind == "forest-lex" {
        let base_root_first = matches!(base, OrderConfig::ForestLex { root_first: true });
        OrderConfig::ForestLex {
            root_first: over.root_first || base_root_first,
        }
    } else {
        let (base_wm, base_pm) = match base {
            OrderConfig::PathLex {
                word_mode,
                perm_mode,
            } => (word_mode, perm_mode),
            _ => (WordMode::DegLex, PermMode::RevLex),
        };
        OrderConfig::PathLex {
            word_mode: over.word_mode.unwrap_or(base_wm),
            perm_mode: over.perm_mode.unwrap_or(base_pm),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("cannot read {}: {e}", args.file)),
    };
    let parsed = match dsl::parse::<Rat>(&text) {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("{}: {e}", args.file)),
    };
    let mut presentation = parsed.presentation;
    presentation.order_config =
        apply_order_override(presentation.order_config, &args.order_override);

    let result = match args.command.as_str() {
        "complete" => cmd_complete(&presentation, &args.cfg),
        "is-gb" => cmd_is_gb(&presentation, &args.cfg),
        "is-pbw" => cmd_is_pbw(&presentation, &args.cfg),
        "dims" => cmd_dims(&presentation, &args.cfg),
        "nf" => cmd_nf(&presentation, &args.cfg, args.element.as_deref().unwrap()),
        "show" => cmd_show(&presentation),
        _ => unreachable!(),
    };
    match result {
        Err(e) => usage_error(&e),
        Ok(out) => {
            if args.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status as u8)
        }
    }
}
