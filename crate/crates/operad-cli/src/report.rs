//! Command drivers: each runs one subcommand against a parsed presentation
//! and renders both the human report and the structured document.

use std::fmt::Write as _;

use operad::algebra::normal_form;
use operad::analysis::{
    certified_arity_bound, dimensions, normal_monomials, pbw_certificate, PbwOutcome,
};
use operad::completion::{buchberger, is_groebner, CompletionOptions, Provenance};
use operad::dsl::{parse_element, print_presentation};
use operad::order::{validate_admissibility, MonomialOrder, OrderConfig, PermMode, WordMode};
use operad::{Basis, Presentation, Rat};

use crate::json::Json;

pub struct CommandOutput {
    pub text: String,
    pub json: Json,
    /// Process exit status: 0 success, 1 mathematical negative.
    pub status: i32,
}

pub struct RunConfig {
    pub cap: Option<u32>,
    pub threads: usize,
    pub up_to: u32,
    pub monomials: bool,
}

fn order_json(cfg: OrderConfig) -> Json {
    match cfg {
        OrderConfig::PathLex {
            word_mode,
            perm_mode,
        } => Json::Obj(vec![
            ("kind", Json::str("path-lex")),
            (
                "word_mode",
                Json::str(match word_mode {
                    WordMode::DegLex => "deglex",
                    WordMode::Lex => "lex",
                    WordMode::RevDegLex => "revdeglex",
                }),
            ),
            (
                "perm_mode",
                Json::str(match perm_mode {
                    PermMode::RevLex => "revlex",
                    PermMode::Lex => "lex",
                }),
            ),
        ]),
        OrderConfig::ForestLex { root_first } => Json::Obj(vec![
            ("kind", Json::str("forest-lex")),
            ("root_first", Json::Bool(root_first)),
        ]),
    }
}

fn order_text(cfg: OrderConfig) -> String {
    match cfg {
        OrderConfig::PathLex {
            word_mode,
            perm_mode,
        } => format!(
            "path-lex (word-mode {}, perm-mode {})",
            match word_mode {
                WordMode::DegLex => "deglex",
                WordMode::Lex => "lex",
                WordMode::RevDegLex => "revdeglex",
            },
            match perm_mode {
                PermMode::RevLex => "revlex",
                PermMode::Lex => "lex",
            }
        ),
        OrderConfig::ForestLex { root_first } => format!(
            "forest-lex{}",
            if root_first { " (root-first)" } else { "" }
        ),
    }
}

/// Non-default order configurations are accepted for completion-style
/// commands only after passing a randomized admissibility check.
pub fn gate_order(p: &Presentation) -> Result<MonomialOrder, String> {
    let order = p.order();
    if p.order_config != OrderConfig::default() {
        if let Err(v) = validate_admissibility(&order, &p.generators, 2000, 20260808) {
            return Err(format!(
                "order configuration {} violates composition monotonicity: \
                 {} <= {} and {} <= {} but composing gives {} > {}",
                order_text(p.order_config),
                v.alpha.format(&p.generators),
                v.alpha_bigger.format(&p.generators),
                v.beta.format(&p.generators),
                v.beta_bigger.format(&p.generators),
                v.composed_small.format(&p.generators),
                v.composed_big.format(&p.generators),
            ));
        }
    }
    Ok(order)
}

fn default_cap(p: &Presentation) -> u32 {
    CompletionOptions::default_for(&p.relations).degree_cap
}

fn complete_basis(p: &Presentation, cfg: &RunConfig) -> Result<Basis, String> {
    let order = gate_order(p)?;
    let opts = CompletionOptions {
        degree_cap: cfg.cap.unwrap_or_else(|| default_cap(p)),
        reduce: true,
        threads: cfg.threads,
    };
    buchberger(&p.relations, &order, &opts).map_err(|e| e.to_string())
}

fn provenance_json(p: &Provenance, pres: &Presentation) -> Json {
    match p {
        Provenance::Input => Json::str("input"),
        Provenance::SPair { left, right, multiple } => Json::Obj(vec![
            (
                "spair",
                Json::Arr(vec![Json::Int(*left as i64), Json::Int(*right as i64)]),
            ),
            ("gamma", Json::str(multiple.gamma.format(&pres.generators))),
        ]),
    }
}

fn provenance_text(p: &Provenance, pres: &Presentation) -> String {
    match p {
        Provenance::Input => "input".to_string(),
        Provenance::SPair { left, right, multiple } => format!(
            "s-poly of #{left} and #{right} at {}",
            multiple.gamma.format(&pres.generators)
        ),
    }
}

fn basis_json(basis: &Basis, p: &Presentation) -> Json {
    let order = &basis.order;
    Json::Arr(
        basis
            .elements
            .iter()
            .zip(&basis.meta)
            .map(|(e, m)| {
                Json::Obj(vec![
                    ("serial", Json::Int(m.serial as i64)),
                    ("element", Json::str(e.format(&p.generators, order))),
                    ("arity", Json::Int(e.arity() as i64)),
                    ("op_degree", Json::Int(e.max_op_degree() as i64)),
                    ("provenance", provenance_json(&m.provenance, p)),
                ])
            })
            .collect(),
    )
}

fn generators_json(p: &Presentation) -> Json {
    Json::Arr(
        p.generators
            .iter()
            .map(|(_, g)| {
                Json::Obj(vec![
                    ("name", Json::str(&g.name)),
                    ("arity", Json::Int(g.arity as i64)),
                    ("precedence", Json::Int(g.precedence as i64)),
                ])
            })
            .collect(),
    )
}

fn header_text(p: &Presentation, cap: u32) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "order: {}", order_text(p.order_config));
    let names: Vec<String> = p
        .generators
        .iter()
        .map(|(_, g)| format!("{}/{}", g.name, g.arity))
        .collect();
    let _ = writeln!(s, "generators: {}", names.join(", "));
    let _ = writeln!(s, "degree cap: {cap}");
    s
}

pub fn cmd_complete(p: &Presentation, cfg: &RunConfig) -> Result<CommandOutput, String> {
    let basis = complete_basis(p, cfg)?;
    let mut text = header_text(p, basis.degree_cap);
    let _ = writeln!(
        text,
        "complete up to cap: {} ({} pairs beyond cap skipped)",
        if basis.complete_up_to_cap { "yes" } else { "no" },
        basis.pairs_beyond_cap
    );
    let _ = writeln!(text, "basis ({} elements):", basis.elements.len());
    for (e, m) in basis.elements.iter().zip(&basis.meta) {
        let _ = writeln!(
            text,
            "  [{}] {}    ({})",
            m.serial,
            e.format(&p.generators, &basis.order),
            provenance_text(&m.provenance, p)
        );
    }
    let json = Json::Obj(vec![
        ("command", Json::str("complete")),
        ("order", order_json(p.order_config)),
        ("generators", generators_json(p)),
        ("cap", Json::Int(basis.degree_cap as i64)),
        ("complete_up_to_cap", Json::Bool(basis.complete_up_to_cap)),
        ("pairs_beyond_cap", Json::Int(basis.pairs_beyond_cap as i64)),
        ("basis", basis_json(&basis, p)),
    ]);
    Ok(CommandOutput {
        text,
        json,
        status: 0,
    })
}

pub fn cmd_is_gb(p: &Presentation, cfg: &RunConfig) -> Result<CommandOutput, String> {
    let order = gate_order(p)?;
    let cap = cfg.cap.unwrap_or_else(|| default_cap(p));
    let report =
        is_groebner(&p.relations, &order, cap, cfg.threads).map_err(|e| e.to_string())?;
    let mut text = header_text(p, cap);
    let _ = writeln!(
        text,
        "pairs checked: {} ({} beyond cap skipped)",
        report.checked.len(),
        report.pairs_beyond_cap
    );
    // per-pair counts of small common multiples within the cap
    let mut per_pair: std::collections::BTreeMap<(usize, usize), (usize, usize)> =
        std::collections::BTreeMap::new();
    for c in &report.checked {
        let entry = per_pair.entry((c.left, c.right)).or_insert((0, 0));
        entry.0 += 1;
        if c.reduced_to_zero {
            entry.1 += 1;
        }
    }
    for ((i, j), (total, zero)) in &per_pair {
        let _ = writeln!(
            text,
            "  pair (#{i}, #{j}): {total} common multiples, {zero} reduced to zero"
        );
    }
    let mut json_fields = vec![
        ("command", Json::str("is-gb")),
        ("order", order_json(p.order_config)),
        ("cap", Json::Int(cap as i64)),
        ("is_basis", Json::Bool(report.is_basis)),
        ("pairs_checked", Json::Int(report.checked.len() as i64)),
        (
            "pairs_beyond_cap",
            Json::Int(report.pairs_beyond_cap as i64),
        ),
    ];
    let status = if report.is_basis {
        let _ = writeln!(text, "result: Groebner basis up to the cap");
        0
    } else {
        let w = report.witness.as_ref().unwrap();
        let _ = writeln!(text, "result: NOT a Groebner basis");
        let _ = writeln!(
            text,
            "witness: s-poly of #{} and #{} at {} has nonzero residue {}",
            w.left,
            w.right,
            w.gamma.format(&p.generators),
            w.residue.format(&p.generators, &order)
        );
        json_fields.push((
            "witness",
            Json::Obj(vec![
                (
                    "pair",
                    Json::Arr(vec![Json::Int(w.left as i64), Json::Int(w.right as i64)]),
                ),
                ("gamma", Json::str(w.gamma.format(&p.generators))),
                (
                    "residue",
                    Json::str(w.residue.format(&p.generators, &order)),
                ),
            ]),
        ));
        1
    };
    Ok(CommandOutput {
        text,
        json: Json::Obj(json_fields),
        status,
    })
}

pub fn cmd_is_pbw(p: &Presentation, cfg: &RunConfig) -> Result<CommandOutput, String> {
    // Quadratic pairs only have common multiples of operation degree <= 3,
    // so completing at cap 3 settles the quadratic-basis question: a basis
    // that stays quadratic is complete, and any higher-degree element
    // already refutes quadraticity under this order.
    let cfg = RunConfig {
        cap: Some(cfg.cap.unwrap_or(3)),
        threads: cfg.threads,
        up_to: cfg.up_to,
        monomials: cfg.monomials,
    };
    let basis = complete_basis(p, &cfg)?;
    let outcome = pbw_certificate(&basis).map_err(|e| e.to_string())?;
    let mut text = header_text(p, basis.degree_cap);
    let mut json_fields = vec![
        ("command", Json::str("is-pbw")),
        ("order", order_json(p.order_config)),
        ("cap", Json::Int(basis.degree_cap as i64)),
    ];
    let status = match &outcome {
        PbwOutcome::Certified { element_count } => {
            let _ = writeln!(
                text,
                "certificate: quadratic Groebner basis with {element_count} elements; \
                 the operad is PBW and therefore Koszul"
            );
            json_fields.push(("pbw", Json::Bool(true)));
            json_fields.push(("elements", Json::Int(*element_count as i64)));
            0
        }
        PbwOutcome::Refused {
            index,
            op_degree,
            provenance,
        } => {
            let el = &basis.elements[*index];
            let _ = writeln!(
                text,
                "refusal: basis element #{index} has operation degree {op_degree} \
                 (quadratic basis required)"
            );
            let _ = writeln!(
                text,
                "witness: {}    ({})",
                el.format(&p.generators, &basis.order),
                provenance_text(provenance, p)
            );
            json_fields.push(("pbw", Json::Bool(false)));
            json_fields.push((
                "witness",
                Json::Obj(vec![
                    ("index", Json::Int(*index as i64)),
                    ("op_degree", Json::Int(*op_degree as i64)),
                    (
                        "element",
                        Json::str(el.format(&p.generators, &basis.order)),
                    ),
                    ("provenance", provenance_json(provenance, p)),
                ]),
            ));
            1
        }
    };
    json_fields.push(("basis", basis_json(&basis, p)));
    Ok(CommandOutput {
        text,
        json: Json::Obj(json_fields),
        status,
    })
}

pub fn cmd_dims(p: &Presentation, cfg: &RunConfig) -> Result<CommandOutput, String> {
    let basis = complete_basis(p, cfg)?;
    let table =
        dimensions(&basis, &p.generators, cfg.up_to, cfg.threads).map_err(|e| e.to_string())?;
    let reliable = certified_arity_bound(&p.generators, basis.degree_cap);
    let mut text = header_text(p, basis.degree_cap);
    let _ = writeln!(text, "dimensions (certified up to arity {reliable}):");
    for &(n, d) in &table.dims {
        let _ = writeln!(text, "  arity {n}: {d}");
    }
    for n in (reliable + 1)..=cfg.up_to {
        let _ = writeln!(
            text,
            "  arity {n}: refused (beyond the range certified by cap {}; rerun with a larger --cap)",
            basis.degree_cap
        );
    }
    let mut json_fields = vec![
        ("command", Json::str("dims")),
        ("order", order_json(p.order_config)),
        ("cap", Json::Int(basis.degree_cap as i64)),
        ("unreliable_above", Json::Int(table.unreliable_above as i64)),
        (
            "dims",
            Json::Arr(
                table
                    .dims
                    .iter()
                    .map(|&(n, d)| {
                        Json::Obj(vec![
                            ("arity", Json::Int(n as i64)),
                            ("dimension", Json::Int(d as i64)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ];
    if cfg.monomials {
        let mut lists = Vec::new();
        for &(n, _) in &table.dims {
            let ms = normal_monomials(&basis, &p.generators, n).map_err(|e| e.to_string())?;
            let printed: Vec<String> = ms.iter().map(|t| t.format(&p.generators)).collect();
            lists.push(Json::Obj(vec![
                ("arity", Json::Int(n as i64)),
                (
                    "monomials",
                    Json::Arr(printed.iter().map(Json::str).collect()),
                ),
            ]));
            let _ = writeln!(
                text,
                "  normal monomials at arity {n}: {}",
                printed.join(", ")
            );
        }
        json_fields.push(("monomials", Json::Arr(lists)));
    }
    Ok(CommandOutput {
        text,
        json: Json::Obj(json_fields),
        status: 0,
    })
}

pub fn cmd_nf(p: &Presentation, cfg: &RunConfig, element: &str) -> Result<CommandOutput, String> {
    let basis = complete_basis(p, cfg)?;
    let f = parse_element::<Rat>(element, &p.generators).map_err(|e| e.to_string())?;
    let nf = normal_form(&f, &basis.elements, &basis.order);
    let reliable = certified_arity_bound(&p.generators, basis.degree_cap);
    let certified = f.arity() <= reliable;
    let mut text = header_text(p, basis.degree_cap);
    let _ = writeln!(text, "input:       {}", f.format(&p.generators, &basis.order));
    let _ = writeln!(text, "normal form: {}", nf.format(&p.generators, &basis.order));
    if !certified {
        let _ = writeln!(
            text,
            "note: arity {} is beyond the range certified by cap {}; the residue \
             may depend on the reduction strategy (rerun with a larger --cap)",
            f.arity(),
            basis.degree_cap
        );
    }
    let json = Json::Obj(vec![
        ("command", Json::str("nf")),
        ("order", order_json(p.order_config)),
        ("cap", Json::Int(basis.degree_cap as i64)),
        ("input", Json::str(f.format(&p.generators, &basis.order))),
        (
            "normal_form",
            Json::str(nf.format(&p.generators, &basis.order)),
        ),
        ("is_zero", Json::Bool(nf.is_zero())),
        ("certified", Json::Bool(certified)),
    ]);
    Ok(CommandOutput {
        text,
        json,
        status: 0,
    })
}

pub fn cmd_show(p: &Presentation) -> Result<CommandOutput, String> {
    let text = print_presentation(p);
    let order = p.order();
    let json = Json::Obj(vec![
        ("command", Json::str("show")),
        ("order", order_json(p.order_config)),
        ("generators", generators_json(p)),
        (
            "relations",
            Json::Arr(
                p.relations
                    .iter()
                    .map(|r| Json::str(r.format(&p.generators, &order)))
                    .collect(),
            ),
        ),
    ]);
    Ok(CommandOutput {
        text,
        json,
        status: 0,
    })
}
