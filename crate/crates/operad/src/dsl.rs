//! The presentation language and its parser.
//!
//! A presentation file is line-oriented; `#` starts a comment. Statements:
//!
//! ```text
//! symmetric                      # interpret generators/relations symmetrically
//! order path-lex                 # or forest-lex
//! word-mode deglex               # deglex | lex | revdeglex   (path-lex)
//! perm-mode revlex               # revlex | lex               (path-lex)
//! root-first                     # forest-lex variant flag
//! generator mu 2 symmetric       # name arity [symmetric|antisymmetric|none]
//! precedence nu < mu             # full chain over all generators
//! action w (1 2) -> -w           # explicit symmetry entry (symmetric mode)
//! relation mu(mu(1,2),3) - mu(1,mu(2,3))
//! ```
//!
//! In symmetric mode a generator with attribute `none` expands into one
//! shuffle generator per permutation of its inputs (`g`, `g_21`, ...),
//! relations are translated, and the relation set is closed under the
//! symmetric-group action before anything else sees it. Printing a parsed
//! presentation always emits the expanded shuffle form; parsing that text
//! again reproduces the presentation exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::OperadElement;
use crate::coeff::Coefficient;
use crate::order::{MonomialOrder, OrderConfig, PermMode, WordMode};
use crate::symmetric::{
    canonicalize_twisted, symmetrize_relations, Perm, SymmetryError, SymmetryTable,
};
use crate::trees::{GenId, Generator, GeneratorSet, TreeMonomial};

/// A parse error with its position in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A fully shuffle-level presentation: generators with precedences, the
/// order configuration, and canonicalized monic relations (already closed
/// under the symmetric-group action when the source was symmetric).
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation<C> {
    pub generators: GeneratorSet,
    pub order_config: OrderConfig,
    pub relations: Vec<OperadElement<C>>,
}

impl<C: Coefficient> Presentation<C> {
    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::new(self.order_config, &self.generators)
    }
}

/// Parser output: the presentation plus the symmetry data that produced
/// it, retained for symmetric-action queries and diagnostics.
#[derive(Debug, Clone)]
pub struct ParsedFile<C> {
    pub presentation: Presentation<C>,
    /// Symmetry table over the shuffle generators; present only for
    /// symmetric-mode sources.
    pub symmetry: Option<SymmetryTable>,
    /// Relations as translated from the source, before closure under the
    /// symmetric-group action.
    pub raw_relations: Vec<OperadElement<C>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymmetryAttr {
    Symmetric,
    Antisymmetric,
    Free,
}

struct GenDecl {
    name: String,
    arity: u32,
    attr: Option<SymmetryAttr>,
    line: usize,
}

struct ActionDecl {
    gen: String,
    i: u32,
    j: u32,
    negate: bool,
    target: String,
    line: usize,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

/// Parses a presentation file.
pub fn parse<C: Coefficient>(text: &str) -> Result<ParsedFile<C>, ParseError> {
    let mut symmetric_mode = false;
    let mut order_kind: Option<&str> = None;
    let mut word_mode = WordMode::DegLex;
    let mut perm_mode = PermMode::RevLex;
    let mut root_first = false;
    let mut decls: Vec<GenDecl> = Vec::new();
    let mut actions: Vec<ActionDecl> = Vec::new();
    let mut precedence_chain: Option<(Vec<String>, usize)> = None;
    let mut relation_lines: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let s = stripped.trim();
        if s.is_empty() {
            continue;
        }
        let mut words = s.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "symmetric" => {
                symmetric_mode = true;
                if words.next().is_some() {
                    return err(line, 1, "unexpected text after `symmetric`");
                }
            }
            "order" => {
                let v = words.next().unwrap_or("");
                match v {
                    "path-lex" | "forest-lex" => {
                        order_kind = Some(if v == "path-lex" { "path" } else { "forest" })
                    }
                    _ => return err(line, 1, "order must be `path-lex` or `forest-lex`"),
                }
            }
            "word-mode" => {
                word_mode = match words.next().unwrap_or("") {
                    "deglex" => WordMode::DegLex,
                    "lex" => WordMode::Lex,
                    "revdeglex" => WordMode::RevDegLex,
                    _ => return err(line, 1, "word-mode must be deglex, lex or revdeglex"),
                };
            }
            "perm-mode" => {
                perm_mode = match words.next().unwrap_or("") {
                    "revlex" => PermMode::RevLex,
                    "lex" => PermMode::Lex,
                    _ => return err(line, 1, "perm-mode must be revlex or lex"),
                };
            }
            "root-first" => {
                root_first = true;
            }
            "generator" => {
                let name = match words.next() {
                    Some(n) if is_ident(n) => n.to_string(),
                    _ => return err(line, 1, "generator needs an identifier name"),
                };
                let arity: u32 = match words.next().and_then(|w| w.parse().ok()) {
                    Some(a) if a >= 1 => a,
                    _ => return err(line, 1, "generator needs a positive integer arity"),
                };
                let attr = match words.next() {
                    None => None,
                    Some("symmetric") => Some(SymmetryAttr::Symmetric),
                    Some("antisymmetric") => Some(SymmetryAttr::Antisymmetric),
                    Some("none") => Some(SymmetryAttr::Free),
                    Some(other) => {
                        return err(line, 1, format!("unknown symmetry attribute `{other}`"))
                    }
                };
                decls.push(GenDecl {
                    name,
                    arity,
                    attr,
                    line,
                });
            }
            "precedence" => {
                let rest: Vec<&str> = words.collect();
                let chain = parse_precedence_chain(&rest, line)?;
                if precedence_chain.is_some() {
                    return err(line, 1, "duplicate precedence line");
                }
                precedence_chain = Some((chain, line));
            }
            "action" => {
                let rest = s["action".len()..].trim();
                actions.push(parse_action(rest, line)?);
            }
            "relation" => {
                relation_lines.push((line, s["relation".len()..].trim().to_string()));
            }
            other => {
                return err(line, 1, format!("unknown statement `{other}`"));
            }
        }
    }

    if decls.is_empty() {
        return err(1, 1, "no generators declared");
    }
    if !symmetric_mode {
        for d in &decls {
            if d.attr.is_some() {
                return err(
                    d.line,
                    1,
                    "symmetry attributes require the `symmetric` mode flag",
                );
            }
        }
        if !actions.is_empty() {
            return err(actions[0].line, 1, "action lines require `symmetric` mode");
        }
    } else {
        for d in &decls {
            let has_action = actions.iter().any(|a| a.gen == d.name);
            if d.attr.is_none() && !has_action {
                return err(
                    d.line,
                    1,
                    format!(
                        "generator {} needs a symmetry attribute or action lines in symmetric mode",
                        d.name
                    ),
                );
            }
            if d.attr.is_some() && has_action {
                return err(
                    d.line,
                    1,
                    format!(
                        "generator {} has both a symmetry attribute and action lines; use one",
                        d.name
                    ),
                );
            }
        }
    }

    // Expand declarations into the shuffle generator set and, in symmetric
    // mode, the symmetry table plus the name translation used by relations.
    let mut gen_list: Vec<Generator> = Vec::new();
    let mut table = SymmetryTable::new();
    // base symmetric name -> family (permutation -> shuffle generator)
    let mut families: BTreeMap<String, BTreeMap<Perm, GenId>> = BTreeMap::new();
    for d in &decls {
        if gen_list.iter().any(|g| g.name == d.name) {
            return err(d.line, 1, format!("duplicate generator `{}`", d.name));
        }
        match (symmetric_mode, d.attr) {
            (false, _) => gen_list.push(Generator {
                name: d.name.clone(),
                arity: d.arity,
                precedence: gen_list.len() as i32,
            }),
            (true, Some(SymmetryAttr::Symmetric)) | (true, Some(SymmetryAttr::Antisymmetric)) => {
                let gid = GenId(gen_list.len() as u32);
                gen_list.push(Generator {
                    name: d.name.clone(),
                    arity: d.arity,
                    precedence: gen_list.len() as i32,
                });
                if d.attr == Some(SymmetryAttr::Symmetric) {
                    table.add_trivial(gid, d.arity);
                } else {
                    table.add_sign(gid, d.arity);
                }
                families.insert(d.name.clone(), BTreeMap::from([(Perm::identity(d.arity), gid)]));
            }
            (true, Some(SymmetryAttr::Free)) => {
                if d.arity > 9 {
                    return err(d.line, 1, "free symmetry is supported up to arity 9");
                }
                let mut family = BTreeMap::new();
                for tau in Perm::all(d.arity) {
                    let name = if tau == Perm::identity(d.arity) {
                        d.name.clone()
                    } else {
                        format!("{}_{}", d.name, tau.one_line())
                    };
                    if gen_list.iter().any(|g| g.name == name) {
                        return err(d.line, 1, format!("expanded name `{name}` collides"));
                    }
                    let gid = GenId(gen_list.len() as u32);
                    gen_list.push(Generator {
                        name,
                        arity: d.arity,
                        precedence: gen_list.len() as i32,
                    });
                    family.insert(tau, gid);
                }
                table.add_regular(&family, d.arity);
                families.insert(d.name.clone(), family);
            }
            (true, None) => {
                // explicit action lines; generator registered plainly
                let gid = GenId(gen_list.len() as u32);
                gen_list.push(Generator {
                    name: d.name.clone(),
                    arity: d.arity,
                    precedence: gen_list.len() as i32,
                });
                families.insert(d.name.clone(), BTreeMap::from([(Perm::identity(d.arity), gid)]));
            }
        }
    }
    let mut gens = GeneratorSet::new(gen_list)
        .map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })?;

    // explicit action entries, completed one arity family at a time
    if !actions.is_empty() {
        let mut by_arity: BTreeMap<u32, Vec<(GenId, Perm, GenId, i8)>> = BTreeMap::new();
        for a in &actions {
            let Some(gid) = gens.by_name(&a.gen) else {
                return err(a.line, 1, format!("action for undeclared generator `{}`", a.gen));
            };
            let Some(tid) = gens.by_name(&a.target) else {
                return err(a.line, 1, format!("action target `{}` is undeclared", a.target));
            };
            let arity = gens.arity(gid);
            if gens.arity(tid) != arity {
                return err(a.line, 1, "action target has a different arity");
            }
            if a.i < 1 || a.j < 1 || a.i > arity || a.j > arity || a.i == a.j {
                return err(a.line, 1, "transposition letters out of range");
            }
            by_arity.entry(arity).or_default().push((
                gid,
                Perm::transposition(arity, a.i, a.j),
                tid,
                if a.negate { -1 } else { 1 },
            ));
        }
        for (arity, seeds) in by_arity {
            table
                .complete_explicit(&gens, arity, &seeds)
                .map_err(|e: SymmetryError| ParseError {
                    line: actions[0].line,
                    col: 1,
                    message: e.to_string(),
                })?;
        }
    }

    // precedence: explicit chain overrides declaration order
    if let Some((chain, line)) = &precedence_chain {
        let mut ranks: Vec<i32> = vec![0; gens.len()];
        let mut mentioned = vec![false; gens.len()];
        for (rank, name) in chain.iter().enumerate() {
            let Some(gid) = gens.by_name(name) else {
                return err(*line, 1, format!("precedence mentions unknown generator `{name}`"));
            };
            if mentioned[gid.0 as usize] {
                return err(*line, 1, format!("generator `{name}` listed twice in precedence"));
            }
            mentioned[gid.0 as usize] = true;
            ranks[gid.0 as usize] = rank as i32;
        }
        if mentioned.iter().any(|m| !m) {
            return err(*line, 1, "precedence must list every generator exactly once");
        }
        let rebuilt: Vec<Generator> = gens
            .iter()
            .map(|(gid, g)| Generator {
                name: g.name.clone(),
                arity: g.arity,
                precedence: ranks[gid.0 as usize],
            })
            .collect();
        gens = GeneratorSet::new(rebuilt).map_err(|e| ParseError {
            line: *line,
            col: 1,
            message: e.to_string(),
        })?;
    }

    let order_config = match order_kind {
        Some("forest") => OrderConfig::ForestLex { root_first },
        _ => OrderConfig::PathLex {
            word_mode,
            perm_mode,
        },
    };
    let order = MonomialOrder::new(order_config, &gens);

    // relations: a symmetric source name resolves to its identity-coset
    // generator; expanded names resolve directly
    let translate = |name: &str| -> Option<GenId> {
        if let Some(family) = families.get(name) {
            let any = *family.values().next().unwrap();
            return family.get(&Perm::identity(gens.arity(any))).copied();
        }
        gens.by_name(name)
    };
    let mut raw_relations: Vec<OperadElement<C>> = Vec::new();
    for (line, src) in &relation_lines {
        let el = parse_element_inner::<C>(src, *line, &gens, &translate, symmetric_mode.then_some(&table))?;
        if el.is_zero() {
            return err(*line, 1, "zero relation");
        }
        if el.support().any(|t| t.is_leaf()) {
            return err(*line, 1, "relations must have operation degree at least 1");
        }
        raw_relations.push(el.monic(&order));
    }

    let relations = if symmetric_mode {
        let closed = symmetrize_relations(&table, &raw_relations).map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })?;
        closed.iter().map(|r| r.monic(&order)).collect()
    } else {
        raw_relations.clone()
    };

    Ok(ParsedFile {
        presentation: Presentation {
            generators: gens,
            order_config,
            relations,
        },
        symmetry: symmetric_mode.then_some(table),
        raw_relations,
    })
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_precedence_chain(words: &[&str], line: usize) -> Result<Vec<String>, ParseError> {
    // given as: name (< name)*  or  name (> name)*; tokens may arrive glued
    let joined = words.join(" ");
    let lt = joined.contains('<');
    let gt = joined.contains('>');
    if lt && gt {
        return err(line, 1, "precedence chain cannot mix `<` and `>`");
    }
    let sep = if gt { '>' } else { '<' };
    let mut names: Vec<String> = joined
        .split(sep)
        .map(|p| p.trim().to_string())
        .collect();
    if names.iter().any(|n| n.is_empty() || !is_ident(n)) {
        return err(line, 1, "precedence chain must list generator names");
    }
    if gt {
        names.reverse(); // store ascending
    }
    Ok(names)
}

fn parse_action(rest: &str, line: usize) -> Result<ActionDecl, ParseError> {
    // form: NAME ( i j ) -> [-] NAME
    let Some(open) = rest.find('(') else {
        return err(line, 1, "action needs a transposition in parentheses");
    };
    let gen = rest[..open].trim();
    if !is_ident(gen) {
        return err(line, 1, "action needs a generator name");
    }
    let Some(close) = rest.find(')') else {
        return err(line, 1, "unclosed transposition");
    };
    let inside = &rest[open + 1..close];
    let nums: Vec<&str> = inside.split_whitespace().collect();
    if nums.len() != 2 {
        return err(line, 1, "transposition needs exactly two letters");
    }
    let i: u32 = nums[0].parse().map_err(|_| ParseError {
        line,
        col: 1,
        message: "bad transposition letter".into(),
    })?;
    let j: u32 = nums[1].parse().map_err(|_| ParseError {
        line,
        col: 1,
        message: "bad transposition letter".into(),
    })?;
    let after = rest[close + 1..].trim();
    let Some(stripped) = after.strip_prefix("->") else {
        return err(line, 1, "action needs `->` and a signed target");
    };
    let mut target = stripped.trim();
    let negate = target.starts_with('-');
    if negate {
        target = target[1..].trim();
    }
    if !is_ident(target) {
        return err(line, 1, "action target must be a generator name");
    }
    Ok(ActionDecl {
        gen: gen.to_string(),
        i,
        j,
        negate,
        target: target.to_string(),
        line,
    })
}

/// Parses an element in operation notation against a generator set, e.g.
/// `mu(mu(1,2),3) - 2 mu(1,mu(2,3))`. Used by the `nf` command.
pub fn parse_element<C: Coefficient>(
    text: &str,
    gens: &GeneratorSet,
) -> Result<OperadElement<C>, ParseError> {
    let translate = |name: &str| gens.by_name(name);
    parse_element_inner(text, 1, gens, &translate, None)
}

fn parse_element_inner<C: Coefficient>(
    text: &str,
    line: usize,
    gens: &GeneratorSet,
    translate: &dyn Fn(&str) -> Option<GenId>,
    twist: Option<&SymmetryTable>,
) -> Result<OperadElement<C>, ParseError> {
    let mut p = ElementParser {
        text,
        pos: 0,
        line,
        gens,
        translate,
    };
    let terms = p.element::<C>()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return err(line, p.pos + 1, "trailing characters after element");
    }
    let mut arity: Option<u32> = None;
    let mut out: Option<OperadElement<C>> = None;
    for (coeff, raw) in terms {
        let n = raw.arity();
        let mut seen = vec![false; n as usize];
        for l in raw.leaves() {
            if l == 0 || l > n || std::mem::replace(&mut seen[(l - 1) as usize], true) {
                return err(line, 1, format!("leaf labels must be a bijection onto 1..={n}"));
            }
        }
        match arity {
            None => arity = Some(n),
            Some(a) if a != n => {
                return err(line, 1, format!("relation mixes arities {a} and {n}"))
            }
            _ => {}
        }
        let (sign, canon) = match twist {
            Some(table) => canonicalize_twisted(table, &raw).map_err(|e| ParseError {
                line,
                col: 1,
                message: e.to_string(),
            })?,
            None => {
                let canon = raw.canonicalize(gens).map_err(|e| ParseError {
                    line,
                    col: 1,
                    message: e.to_string(),
                })?;
                (1, canon)
            }
        };
        let c = if sign >= 0 { coeff } else { C::zero() - coeff };
        let el = out.get_or_insert_with(|| OperadElement::zero(arity.unwrap()));
        el.add_term(canon, c);
    }
    out.ok_or(ParseError {
        line,
        col: 1,
        message: "empty element".into(),
    })
}

struct ElementParser<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    gens: &'a GeneratorSet,
    translate: &'a dyn Fn(&str) -> Option<GenId>,
}

impl<'a> ElementParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.pos + 1, message)
    }

    fn element<C: Coefficient>(&mut self) -> Result<Vec<(C, TreeMonomial)>, ParseError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'-' {
                negate = true;
                self.pos += 1;
            } else if c == b'+' {
                self.pos += 1;
            }
        }
        terms.push(self.term::<C>(negate)?);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term::<C>(false)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.term::<C>(true)?);
                }
                _ => return Ok(terms),
            }
        }
    }

    fn term<C: Coefficient>(&mut self, negate: bool) -> Result<(C, TreeMonomial), ParseError> {
        self.skip_ws();
        let mut coeff = C::one();
        // optional coefficient: INT [/ INT], followed by optional `*`
        let save = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.integer()?;
            self.skip_ws();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                let den = self.integer()?;
                if den == 0 {
                    return self.fail("zero denominator");
                }
                coeff = C::from_i64(num).unwrap() / C::from_i64(den).unwrap();
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
            } else {
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    coeff = C::from_i64(num).unwrap();
                } else if self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
                {
                    // coefficient by juxtaposition
                    coeff = C::from_i64(num).unwrap();
                } else {
                    // the integer was a bare leaf, not a coefficient
                    self.pos = save;
                }
            }
        }
        let mono = self.monomial()?;
        let coeff = if negate { C::zero() - coeff } else { coeff };
        Ok((coeff, mono))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected an integer");
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ParseError {
                line: self.line,
                col: start + 1,
                message: "integer out of range".into(),
            })
    }

    fn monomial(&mut self) -> Result<TreeMonomial, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if n < 1 {
                    return self.fail("leaf labels are positive");
                }
                Ok(TreeMonomial::Leaf(n as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let Some(gid) = (self.translate)(name) else {
                    return err(self.line, start + 1, format!("unknown generator `{name}`"));
                };
                self.skip_ws();
                if self.peek() != Some(b'(') {
                    return self.fail("expected `(` after generator name");
                }
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    children.push(self.monomial()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.fail("expected `,` or `)`"),
                    }
                }
                let expected = self.gens.arity(gid);
                if children.len() as u32 != expected {
                    return self.fail(format!(
                        "generator `{}` expects {expected} arguments, got {}",
                        self.gens.get(gid).name,
                        children.len()
                    ));
                }
                Ok(TreeMonomial::Vertex {
                    gen: gid,
                    children,
                })
            }
            _ => self.fail("expected a monomial"),
        }
    }
}

/// Prints a presentation in the shuffle form accepted by [`parse`];
/// parsing the output reproduces the presentation exactly.
pub fn print_presentation<C: Coefficient>(p: &Presentation<C>) -> String {
    let mut out = String::new();
    match p.order_config {
        OrderConfig::PathLex {
            word_mode,
            perm_mode,
        } => {
            out.push_str("order path-lex\n");
            out.push_str(&format!(
                "word-mode {}\n",
                match word_mode {
                    WordMode::DegLex => "deglex",
                    WordMode::Lex => "lex",
                    WordMode::RevDegLex => "revdeglex",
                }
            ));
            out.push_str(&format!(
                "perm-mode {}\n",
                match perm_mode {
                    PermMode::RevLex => "revlex",
                    PermMode::Lex => "lex",
                }
            ));
        }
        OrderConfig::ForestLex { root_first } => {
            out.push_str("order forest-lex\n");
            if root_first {
                out.push_str("root-first\n");
            }
        }
    }
    for (_, g) in p.generators.iter() {
        out.push_str(&format!("generator {} {}\n", g.name, g.arity));
    }
    if p.generators.len() > 1 {
        let mut by_prec: Vec<&Generator> = p.generators.iter().map(|(_, g)| g).collect();
        by_prec.sort_by_key(|g| g.precedence);
        let chain: Vec<&str> = by_prec.iter().map(|g| g.name.as_str()).collect();
        out.push_str(&format!("precedence {}\n", chain.join(" < ")));
    }
    let order = p.order();
    for r in &p.relations {
        out.push_str(&format!("relation {}\n", r.format(&p.generators, &order)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn parse_ok(text: &str) -> ParsedFile<Rat> {
        parse(text).expect("parse should succeed")
    }

    #[test]
    fn parse_com_file() {
        let f = parse_ok(
            "symmetric\ngenerator mu 2 symmetric\nrelation mu(mu(1,2),3) - mu(1,mu(2,3))\n",
        );
        let p = &f.presentation;
        assert_eq!(p.generators.len(), 1);
        assert_eq!(p.relations.len(), 2);
        assert!(f.symmetry.is_some());
        assert_eq!(f.raw_relations.len(), 1);
        let o = p.order();
        assert_eq!(
            p.relations[1].format(&p.generators, &o),
            "mu(mu(1,3),2) - mu(1,mu(2,3))"
        );
    }

    #[test]
    fn parse_as_file_expands_generators() {
        let f = parse_ok(
            "symmetric\ngenerator star 2 none\nprecedence star_21 < star\n\
             relation star(star(1,2),3) - star(1,star(2,3))\n",
        );
        let p = &f.presentation;
        assert_eq!(p.generators.len(), 2);
        assert!(p.generators.by_name("star").is_some());
        assert!(p.generators.by_name("star_21").is_some());
        assert_eq!(p.relations.len(), 6);
        // precedence: star above star_21
        let star = p.generators.by_name("star").unwrap();
        let star21 = p.generators.by_name("star_21").unwrap();
        assert!(p.generators.get(star).precedence > p.generators.get(star21).precedence);
    }

    #[test]
    fn parse_errors_are_positioned() {
        let e = parse::<Rat>("generator mu 2\nrelation mu(1,2) - mu(1,2)\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("zero relation"));

        let e = parse::<Rat>("generator mu 2\ngenerator mu 2\nrelation mu(1,2)\n").unwrap_err();
        assert!(e.message.contains("duplicate generator"));

        let e = parse::<Rat>("symmetric\ngenerator mu 2 weird\nrelation mu(1,2)\n").unwrap_err();
        assert!(e.message.contains("unknown symmetry attribute"));

        let e =
            parse::<Rat>("generator mu 2\nrelation mu(1,2) + mu(mu(1,2),3)\n").unwrap_err();
        assert!(e.message.contains("mixes arities"), "{}", e.message);

        let e = parse::<Rat>("generator mu 2 symmetric\nrelation mu(1,2)\n").unwrap_err();
        assert!(e.message.contains("symmetric"), "{}", e.message);

        let e = parse::<Rat>("generator mu 2\nrelation mu(1,3)\n").unwrap_err();
        assert!(e.message.contains("bijection"), "{}", e.message);
    }

    #[test]
    fn element_parser_errors() {
        let g = GeneratorSet::new(vec![Generator {
            name: "mu".into(),
            arity: 2,
            precedence: 0,
        }])
        .unwrap();
        let e = parse_element::<Rat>("nu(1,2)", &g).unwrap_err();
        assert!(e.message.contains("unknown generator"));
        assert_eq!(e.col, 1);
        let e = parse_element::<Rat>("mu(1,2,3)", &g).unwrap_err();
        assert!(e.message.contains("expects 2 arguments"));
        let e = parse_element::<Rat>("mu(1,2) junk", &g).unwrap_err();
        assert!(e.message.contains("trailing"));
    }

    #[test]
    fn coefficients_parse_and_print() {
        let g = GeneratorSet::new(vec![Generator {
            name: "mu".into(),
            arity: 2,
            precedence: 0,
        }])
        .unwrap();
        let o = MonomialOrder::new(OrderConfig::default(), &g);
        let e = parse_element::<Rat>("2 mu(mu(1,2),3) - 1/2 mu(1,mu(2,3)) + 3*mu(mu(1,3),2)", &g)
            .unwrap();
        let printed = e.format(&g, &o);
        assert_eq!(printed, "2 mu(mu(1,2),3) + 3 mu(mu(1,3),2) - 1/2 mu(1,mu(2,3))");
        let back = parse_element::<Rat>(&printed, &g).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn print_parse_round_trip_is_identity() {
        let sources = [
            "symmetric\ngenerator mu 2 symmetric\nrelation mu(mu(1,2),3) - mu(1,mu(2,3))\n",
            "symmetric\ngenerator star 2 none\nprecedence star_21 < star\n\
             relation star(star(1,2),3) - star(1,star(2,3))\n",
            "order forest-lex\nroot-first\ngenerator a 2\ngenerator b 2\n\
             relation a(a(1,2),3) - b(1,a(2,3))\n",
            "word-mode revdeglex\ngenerator a 2\nrelation a(a(1,2),3) - a(1,a(2,3))\n",
        ];
        for src in sources {
            let p1 = parse::<Rat>(src).unwrap().presentation;
            let text = print_presentation(&p1);
            let p2 = parse::<Rat>(&text).unwrap().presentation;
            assert_eq!(p1, p2, "round trip failed for:\n{src}\nprinted:\n{text}");
            // printing is a fixed point
            assert_eq!(print_presentation(&p2), text);
        }
    }

    #[test]
    fn precedence_chain_with_greater_than() {
        let f = parse_ok(
            "generator a 2\ngenerator b 2\nprecedence a > b\nrelation a(a(1,2),3) - b(1,b(2,3))\n",
        );
        let p = &f.presentation;
        let a = p.generators.by_name("a").unwrap();
        let b = p.generators.by_name("b").unwrap();
        assert!(p.generators.get(a).precedence > p.generators.get(b).precedence);
        let e = parse::<Rat>(
            "generator a 2\ngenerator b 2\nprecedence a\nrelation a(1,a(2,3))\n",
        )
        .unwrap_err();
        assert!(e.message.contains("every generator"));
    }

    #[test]
    fn shuffle_mode_rejects_symmetry_syntax() {
        let e = parse::<Rat>("generator mu 2 symmetric\nrelation mu(mu(1,2),3)\n").unwrap_err();
        assert!(e.message.contains("symmetric"));
        let e = parse::<Rat>("generator mu 2\naction mu (1 2) -> -mu\nrelation mu(1,2)\n")
            .unwrap_err();
        assert!(e.message.contains("symmetric"));
    }

    #[test]
    fn unit_terms_and_conflicting_symmetry_are_rejected() {
        let e = parse::<Rat>("generator u 1\nrelation u(1) - 1\n").unwrap_err();
        assert!(e.message.contains("operation degree"), "{}", e.message);
        let e = parse::<Rat>(
            "symmetric\ngenerator w 3 antisymmetric\naction w (1 2) -> -w\nrelation w(w(1,2,3),4,5)\n",
        )
        .unwrap_err();
        assert!(e.message.contains("both"), "{}", e.message);
    }

    #[test]
    fn explicit_action_lines_build_sign_table() {
        let f = parse_ok(
            "symmetric\ngenerator w 3\naction w (1 2) -> -w\naction w (2 3) -> -w\n\
             relation w(w(1,2,3),4,5) + w(1,2,w(3,4,5))\n",
        );
        assert_eq!(f.presentation.generators.len(), 1);
        assert!(f.symmetry.is_some());
        // acting by a transposition negates a corolla
        let table = f.symmetry.as_ref().unwrap();
        let w = crate::algebra::OperadElement::<Rat>::monomial(TreeMonomial::corolla(
            crate::trees::GenId(0),
            3,
        ));
        let image = crate::symmetric::act(
            table,
            &crate::symmetric::Perm::from_images(vec![2, 1, 3]),
            &w,
        )
        .unwrap();
        assert_eq!(image, w.neg());
    }
}
