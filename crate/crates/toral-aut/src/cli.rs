//! Command-line front-end: read a problem description, dispatch to the
//! pipeline, and render the result as text or JSON.
//!
//! Input file format (UTF-8 text, `#` starts a comment):
//!
//! ```text
//! vars t1 t2        # variable names fix the ambient rank
//! gen t1*t2 - t1 - 1
//! ```
//!
//! Exit codes: `0` success, `1` input error (unreadable file, syntax error,
//! bad flags, corrupt certificate), `2` method-scope error (the residual is
//! not a hypersurface, or the support exceeds the enumeration bound).

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::assemble::{aut_structure_with, AssembleError, AutStructure};
use crate::gaff::{
    enumerate_gaff_with, lift_certificate, verify_certificate, AutoCertificate, GaffConfig,
    GaffError,
};
use crate::gaussian::GaussianRational;
use crate::laurent::{LatticeVector, LaurentPoly, ScalarTuple};
use crate::parser::parse_laurent;
use crate::structure::{lattice_mx, quasitorus_hx, split_torus_factor, Quasitorus};
use crate::zlattice::IntMatrix;

const USAGE: &str = "\
toral-aut — automorphism groups of varieties embedded in algebraic tori

USAGE:
    toral-aut <COMMAND> [FLAGS] <INPUT> [CERTIFICATE]

COMMANDS:
    parse    echo the parsed generators in canonical form
    hx       the quasitorus of torus elements preserving the variety
    split    split off the maximal torus factor
    gaff     enumerate the finite support-symmetry group (hypersurface case)
    aut      structural description of the full automorphism group
    verify   check a saved automorphism certificate; prints true or false
    help     show this message

FLAGS:
    --format text|json   output format (default text)
    --max-support N      enumeration bound on support size (default 9)
    --threads N          worker threads for the enumeration (default 1)

INPUT FILE FORMAT:
    vars t1 t2 ...       variable names, one line, before any generator
    gen <expression>     a Laurent-polynomial generator (may repeat)
    # comment            comments run to end of line

    Expressions use integer or rational constants, the imaginary unit i,
    products, powers with integer exponents (t1^-2), and + or -.";

/// A problem description: named torus coordinates and the generators of the
/// defining ideal, all parsed to the same rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemInput {
    pub variables: Vec<String>,
    pub generators: Vec<LaurentPoly>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum CliError {
    /// Unusable input: exit code 1.
    Input(String),
    /// The method does not cover the request: exit code 2.
    Scope(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum OutputFormat {
    Text,
    Json,
}

struct Options {
    format: OutputFormat,
    max_support: usize,
    threads: usize,
    positional: Vec<String>,
}

impl Options {
    fn gaff_config(&self) -> GaffConfig {
        GaffConfig {
            max_support: self.max_support,
            threads: self.threads,
        }
    }
}

/// One subcommand's result, rendered both ways; `run_cli` picks one.
struct Body {
    text: String,
    json: Value,
}

/// Entry point shared by the binary and the tests: returns the process exit
/// code and writes the report to `out` (errors go to `err`).
pub fn run_cli(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match execute(args, out) {
        Ok(()) => 0,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            1
        }
        Err(CliError::Scope(msg)) => {
            let _ = writeln!(err, "out of scope: {}", msg);
            2
        }
    }
}

fn execute(args: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Input(format!("missing command\n\n{}", USAGE)));
    };
    if matches!(command.as_str(), "help" | "--help" | "-h") {
        writeln!(out, "{}", USAGE).map_err(io_error)?;
        return Ok(());
    }
    let opts = parse_options(&args[1..]).map_err(CliError::Input)?;
    let started = Instant::now();
    let body = match command.as_str() {
        "parse" => cmd_parse(&read_problem(&opts, 0)?),
        "hx" => cmd_hx(&read_problem(&opts, 0)?),
        "split" => cmd_split(&read_problem(&opts, 0)?),
        "gaff" => cmd_gaff(&read_problem(&opts, 0)?, &opts),
        "aut" => cmd_aut(&read_problem(&opts, 0)?, &opts),
        "verify" => cmd_verify(&opts),
        other => Err(CliError::Input(format!(
            "unknown command `{}`\n\n{}",
            other, USAGE
        ))),
    }?;
    let timing_ms = started.elapsed().as_millis() as u64;
    match opts.format {
        OutputFormat::Text => {
            writeln!(out, "command: {}", args.join(" ")).map_err(io_error)?;
            writeln!(out, "{}", body.text.trim_end()).map_err(io_error)?;
            writeln!(out, "timing: {} ms", timing_ms).map_err(io_error)?;
        }
        OutputFormat::Json => {
            let report = json!({
                "command": command,
                "arguments": args[1..].to_vec(),
                "result": body.json,
                "timing_ms": timing_ms,
            });
            let rendered = serde_json::to_string_pretty(&report)
                .expect("report serialization cannot fail");
            writeln!(out, "{}", rendered).map_err(io_error)?;
        }
    }
    Ok(())
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::Input(format!("cannot write output: {}", e))
}

fn parse_options(rest: &[String]) -> Result<Options, String> {
    let mut format = OutputFormat::Text;
    let mut max_support = GaffConfig::default().max_support;
    let mut threads = GaffConfig::default().threads;
    let mut positional = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        let arg = &rest[i];
        if let Some(name) = arg.strip_prefix("--") {
            let (name, inline) = match name.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (name, None),
            };
            let mut take_value = || -> Result<String, String> {
                match &inline {
                    Some(v) => Ok(v.clone()),
                    None => {
                        i += 1;
                        rest.get(i)
                            .cloned()
                            .ok_or_else(|| format!("flag --{} needs a value", name))
                    }
                }
            };
            match name {
                "format" => {
                    format = match take_value()?.as_str() {
                        "text" => OutputFormat::Text,
                        "json" => OutputFormat::Json,
                        other => {
                            return Err(format!(
                                "unknown format `{}` (expected text or json)",
                                other
                            ))
                        }
                    }
                }
                "max-support" => {
                    let v = take_value()?;
                    max_support = v
                        .parse()
                        .map_err(|_| format!("--max-support needs a nonnegative integer, got `{}`", v))?;
                }
                "threads" => {
                    let v = take_value()?;
                    threads = v
                        .parse()
                        .ok()
                        .filter(|&t: &usize| t >= 1)
                        .ok_or_else(|| format!("--threads needs a positive integer, got `{}`", v))?;
                }
                other => return Err(format!("unknown flag `--{}`\n\n{}", other, USAGE)),
            }
        } else if arg.starts_with('-') && arg.len() > 1 {
            return Err(format!("unknown flag `{}`\n\n{}", arg, USAGE));
        } else {
            positional.push(arg.clone());
        }
        i += 1;
    }
    Ok(Options {
        format,
        max_support,
        threads,
        positional,
    })
}

/// Read and parse the problem file at positional index `idx`.
fn read_problem(opts: &Options, idx: usize) -> Result<ProblemInput, CliError> {
    let expected = idx + 1;
    if opts.positional.len() < expected {
        return Err(CliError::Input(format!(
            "missing input file\n\n{}",
            USAGE
        )));
    }
    let path = &opts.positional[idx];
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read `{}`: {}", path, e)))?;
    parse_problem(&text).map_err(|msg| CliError::Input(format!("{}: {}", path, msg)))
}

/// Parse the `vars …` / `gen …` problem format.
pub fn parse_problem(text: &str) -> Result<ProblemInput, String> {
    let mut variables: Option<Vec<String>> = None;
    let mut generators = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let n = index + 1;
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "vars" => {
                if variables.is_some() {
                    return Err(format!("line {}: duplicate `vars` line", n));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(format!("line {}: `vars` needs at least one name", n));
                }
                for name in &names {
                    let mut chars = name.chars();
                    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
                    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !head_ok || !tail_ok {
                        return Err(format!(
                            "line {}: invalid variable name `{}` (letter, then letters, digits or _)",
                            n, name
                        ));
                    }
                    if name == "i" {
                        return Err(format!(
                            "line {}: `i` is reserved for the imaginary unit",
                            n
                        ));
                    }
                }
                let mut sorted = names.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != names.len() {
                    return Err(format!("line {}: duplicate variable name", n));
                }
                variables = Some(names);
            }
            "gen" => {
                let Some(vars) = &variables else {
                    return Err(format!("line {}: `gen` before `vars`", n));
                };
                if rest.is_empty() {
                    return Err(format!("line {}: `gen` needs an expression", n));
                }
                let poly = parse_laurent(rest, vars).map_err(|e| {
                    format!("line {}: expression offset {}: {}", n, e.position, e.message)
                })?;
                generators.push(poly);
            }
            other => {
                return Err(format!(
                    "line {}: expected `vars …` or `gen …`, found `{}`",
                    n, other
                ));
            }
        }
    }
    let variables = variables.ok_or_else(|| "missing `vars` line".to_string())?;
    Ok(ProblemInput {
        variables,
        generators,
    })
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_parse(input: &ProblemInput) -> Result<Body, CliError> {
    let mut text = String::new();
    let _ = writeln!(text, "variables: {}", input.variables.join(", "));
    let _ = writeln!(text, "generators ({}):", input.generators.len());
    for (k, g) in input.generators.iter().enumerate() {
        let _ = writeln!(text, "  [{}] {}", k, g);
    }
    let json = json!({
        "variables": input.variables,
        "generators": input.generators.iter().map(poly_to_json).collect::<Vec<_>>(),
    });
    Ok(Body { text, json })
}

fn cmd_hx(input: &ProblemInput) -> Result<Body, CliError> {
    let r = input.variables.len();
    let mx = lattice_mx(&input.generators).map_err(structure_error)?;
    let q = quasitorus_hx(&mx, r).map_err(structure_error)?;
    let text = format!("H(X) ≅ {}\n{}", q, order_line(&q));
    let json = quasitorus_to_json(&q);
    Ok(Body { text, json })
}

fn order_line(q: &Quasitorus) -> String {
    match q.order() {
        Some(o) => format!("order: {}", o),
        None => "order: infinite".to_string(),
    }
}

fn cmd_split(input: &ProblemInput) -> Result<Body, CliError> {
    let r = input.variables.len();
    let split = split_torus_factor(&input.generators, r).map_err(structure_error)?;
    let mut text = String::new();
    let _ = writeln!(text, "torus factor rank: {}", split.torus_rank);
    let _ = writeln!(text, "residual rank: {}", r - split.torus_rank);
    let _ = writeln!(text, "pure torus: {}", if split.is_torus { "yes" } else { "no" });
    let _ = writeln!(
        text,
        "exponent change of basis (new coordinates = matrix · old):"
    );
    for line in split.change_of_basis.to_string().lines() {
        let _ = writeln!(text, "  {}", line);
    }
    let _ = writeln!(
        text,
        "residual generators ({}):",
        split.residual_generators.len()
    );
    for (k, g) in split.residual_generators.iter().enumerate() {
        let _ = writeln!(text, "  [{}] {}", k, g);
    }
    let json = json!({
        "torus_rank": split.torus_rank,
        "residual_rank": r - split.torus_rank,
        "is_torus": split.is_torus,
        "change_of_basis": matrix_to_json(&split.change_of_basis),
        "residual_generators": split.residual_generators.iter().map(poly_to_json).collect::<Vec<_>>(),
    });
    Ok(Body { text, json })
}

/// Pick the hypersurface the `gaff` subcommand enumerates: the input
/// generator itself when it already spans the exponent lattice, otherwise the
/// single residual generator after splitting (reported with the basis change).
fn gaff_target(input: &ProblemInput) -> Result<(LaurentPoly, Option<(usize, IntMatrix)>), CliError> {
    let r = input.variables.len();
    if input.generators.len() == 1 {
        let mx = lattice_mx(&input.generators).map_err(structure_error)?;
        if mx.len() == r {
            return Ok((input.generators[0].clone(), None));
        }
    }
    let split = split_torus_factor(&input.generators, r).map_err(structure_error)?;
    if split.is_torus {
        return Err(CliError::Scope(
            "the variety is a torus; there is no hypersurface to enumerate (try `aut`)"
                .to_string(),
        ));
    }
    match split.residual_generators.len() {
        1 => Ok((
            split.residual_generators[0].clone(),
            Some((split.torus_rank, split.change_of_basis)),
        )),
        k => Err(CliError::Scope(format!(
            "the residual needs {} defining equations; only the hypersurface case \
             (exactly one) is supported",
            k
        ))),
    }
}

fn cmd_gaff(input: &ProblemInput, opts: &Options) -> Result<Body, CliError> {
    let (h, split_info) = gaff_target(input)?;
    let group = enumerate_gaff_with(&h, &opts.gaff_config()).map_err(gaff_error)?;
    let mut text = String::new();
    if let Some((s, w)) = &split_info {
        let _ = writeln!(
            text,
            "note: acting on the residual hypersurface after splitting a rank-{} torus factor;",
            s
        );
        let _ = writeln!(
            text,
            "      exponents below refer to the split coordinates (new = matrix · old):"
        );
        for line in w.to_string().lines() {
            let _ = writeln!(text, "      {}", line);
        }
    }
    let _ = writeln!(
        text,
        "GAff order {}, {}, element orders {:?}",
        group.order(),
        if group.is_abelian() { "abelian" } else { "nonabelian" },
        group.element_orders()
    );
    let _ = writeln!(text, "support points:");
    for (k, m) in group.support().iter().enumerate() {
        let _ = writeln!(text, "  [{}] {}", k, m);
    }
    for (k, (phi, perm)) in group
        .elements()
        .iter()
        .zip(group.perm_action())
        .enumerate()
    {
        let _ = writeln!(
            text,
            "element [{}]: permutation {}, order {}",
            k,
            perm.cycle_string(),
            perm.order()
        );
        let _ = writeln!(text, "  linear:");
        for line in phi.linear.to_string().lines() {
            let _ = writeln!(text, "    {}", line);
        }
        let _ = writeln!(text, "  translation: {}", phi.translation);
    }
    let elements: Vec<Value> = group
        .elements()
        .iter()
        .zip(group.perm_action())
        .enumerate()
        .map(|(k, (phi, perm))| {
            let cert = lift_certificate(&h, phi)
                .expect("every enumerated symmetry lifts to a certificate");
            json!({
                "index": k,
                "permutation": perm.cycle_string(),
                "images": perm.images(),
                "order": perm.order(),
                "linear": matrix_to_json(&phi.linear),
                "translation": vector_to_json(&phi.translation),
                "certificate": certificate_to_json(&cert),
            })
        })
        .collect();
    let json = json!({
        "order": group.order(),
        "abelian": group.is_abelian(),
        "element_orders": group.element_orders(),
        "support": group.support().iter().map(vector_to_json).collect::<Vec<_>>(),
        "split": split_info.as_ref().map(|(s, w)| json!({
            "torus_rank": s,
            "change_of_basis": matrix_to_json(w),
        })),
        "elements": elements,
    });
    Ok(Body { text, json })
}

fn cmd_aut(input: &ProblemInput, opts: &Options) -> Result<Body, CliError> {
    let r = input.variables.len();
    let aut = aut_structure_with(&input.generators, r, &opts.gaff_config())
        .map_err(assemble_error)?;
    let text = render_aut_text(&aut);
    let json = aut_to_json(&aut);
    Ok(Body { text, json })
}

fn render_aut_text(aut: &AutStructure) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "Aut(X) ≅ {}", aut.formula);
    let _ = writeln!(text, "torus factor rank s: {}", aut.torus_rank_s);
    let _ = writeln!(text, "residual unit-lattice rank: {}", aut.rank_e_y);
    let _ = writeln!(text, "H(Y) ≅ {}", aut.h_y);
    match aut.gaff_order {
        Some(o) => {
            let _ = writeln!(text, "GAff order: {}", o);
        }
        None => {
            let _ = writeln!(text, "GAff order: not computed");
        }
    }
    match &aut.aut_y_order {
        Some(o) => {
            let _ = writeln!(text, "|Aut(Y)|: {}", o);
        }
        None => {
            let _ = writeln!(text, "|Aut(Y)|: not computed");
        }
    }
    if aut.notes.is_empty() {
        let _ = writeln!(text, "notes: (none)");
    } else {
        let _ = writeln!(text, "notes:");
        for note in &aut.notes {
            let _ = writeln!(text, "  - {}", note);
        }
    }
    text
}

fn aut_to_json(aut: &AutStructure) -> Value {
    json!({
        "torus_rank_s": aut.torus_rank_s,
        "rank_e_y": aut.rank_e_y,
        "h_y": quasitorus_to_json(&aut.h_y),
        "gaff_order": aut.gaff_order,
        "aut_y_order": aut.aut_y_order.as_ref().map(|o| o.to_string()),
        "formula": aut.formula.to_string(),
        "notes": aut.notes,
    })
}

fn cmd_verify(opts: &Options) -> Result<Body, CliError> {
    if opts.positional.len() != 2 {
        return Err(CliError::Input(format!(
            "verify needs an input file and a certificate file\n\n{}",
            USAGE
        )));
    }
    let input = read_problem(opts, 0)?;
    if input.generators.len() != 1 {
        return Err(CliError::Input(format!(
            "verify needs exactly one generator, found {}",
            input.generators.len()
        )));
    }
    let cert_path = &opts.positional[1];
    let cert_text = std::fs::read_to_string(cert_path)
        .map_err(|e| CliError::Input(format!("cannot read `{}`: {}", cert_path, e)))?;
    let cert_value: Value = serde_json::from_str(&cert_text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {}", cert_path, e)))?;
    let cert = certificate_from_json(&cert_value)
        .map_err(|msg| CliError::Input(format!("{}: {}", cert_path, msg)))?;
    let valid = verify_certificate(&input.generators[0], &cert).map_err(gaff_error)?;
    Ok(Body {
        text: format!("{}\n", valid),
        json: json!({ "valid": valid }),
    })
}

// ---------------------------------------------------------------------------
// Error mapping
// ---------------------------------------------------------------------------

fn structure_error(e: crate::structure::StructureError) -> CliError {
    CliError::Input(e.to_string())
}

fn gaff_error(e: GaffError) -> CliError {
    match e {
        GaffError::SupportTooLarge { .. } | GaffError::NotFullRank => {
            CliError::Scope(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn assemble_error(e: AssembleError) -> CliError {
    match e {
        AssembleError::Structure(inner) => structure_error(inner),
        AssembleError::Gaff(inner) => gaff_error(inner),
    }
}

// ---------------------------------------------------------------------------
// JSON rendering and parsing
// ---------------------------------------------------------------------------

fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

fn gaussian_to_json(g: &GaussianRational) -> Value {
    json!({
        "re": rational_to_string(g.re()),
        "im": rational_to_string(g.im()),
    })
}

fn vector_to_json(v: &LatticeVector) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn poly_to_json(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            json!({
                "exponents": vector_to_json(m),
                "coefficient": gaussian_to_json(c),
            })
        })
        .collect();
    json!({
        "canonical": p.to_string(),
        "rank": p.rank(),
        "terms": terms,
    })
}

fn quasitorus_to_json(q: &Quasitorus) -> Value {
    json!({
        "finite_factors": q.finite_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "torus_rank": q.torus_rank,
        "order": q.order().map(|o| o.to_string()),
        "display": q.to_string(),
    })
}

/// Render a certificate to the documented JSON schema (the same shape
/// `verify` reads back).
pub fn certificate_to_json(cert: &AutoCertificate) -> Value {
    json!({
        "linear": matrix_to_json(&cert.linear),
        "translation_v": vector_to_json(&cert.translation_v),
        "basis_f": cert.basis_f.iter().map(vector_to_json).collect::<Vec<_>>(),
        "constraint_values": cert.constraint_values.iter().map(gaussian_to_json).collect::<Vec<_>>(),
        "explicit_lambda": cert.explicit_lambda.as_ref().map(|l| {
            l.values().iter().map(gaussian_to_json).collect::<Vec<_>>()
        }),
        "proportionality": cert.proportionality.as_ref().map(|(alpha, v)| json!({
            "alpha": gaussian_to_json(alpha),
            "v": vector_to_json(v),
        })),
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key)
        .ok_or_else(|| format!("certificate: missing field `{}`", key))
}

fn parse_json_rational(v: &Value, what: &str) -> Result<BigRational, String> {
    let s = v
        .as_str()
        .ok_or_else(|| format!("certificate: {} must be a string like \"-3/4\"", what))?;
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim())
        .map_err(|_| format!("certificate: {} has a bad numerator `{}`", what, s))?;
    let den = BigInt::from_str(den.trim())
        .map_err(|_| format!("certificate: {} has a bad denominator `{}`", what, s))?;
    if den.is_zero() {
        return Err(format!("certificate: {} has a zero denominator", what));
    }
    Ok(BigRational::new(num, den))
}

fn parse_json_gaussian(v: &Value, what: &str) -> Result<GaussianRational, String> {
    let re = parse_json_rational(field(v, "re")?, &format!("{} (re)", what))?;
    let im = parse_json_rational(field(v, "im")?, &format!("{} (im)", what))?;
    Ok(GaussianRational::new(re, im))
}

fn parse_json_bigint(v: &Value, what: &str) -> Result<BigInt, String> {
    let s = v
        .as_str()
        .ok_or_else(|| format!("certificate: {} must be a string integer", what))?;
    BigInt::from_str(s.trim()).map_err(|_| format!("certificate: {} is not an integer: `{}`", what, s))
}

fn parse_json_vector(v: &Value, what: &str) -> Result<LatticeVector, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("certificate: {} must be an array", what))?;
    let coords = arr
        .iter()
        .map(|c| parse_json_bigint(c, what))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticeVector::new(coords))
}

fn parse_json_matrix(v: &Value, what: &str) -> Result<IntMatrix, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("certificate: {} must be an array of rows", what))?;
    if arr.is_empty() {
        return Err(format!("certificate: {} must have at least one row", what));
    }
    let rows = arr
        .iter()
        .map(|row| parse_json_vector(row, what).map(|v| v.coords().to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(format!("certificate: {} has ragged rows", what));
    }
    Ok(IntMatrix::from_rows(rows))
}

/// Parse a certificate from its JSON rendering, validating shapes and value
/// syntax (membership in the group is `verify_certificate`'s job).
pub fn certificate_from_json(v: &Value) -> Result<AutoCertificate, String> {
    let linear = parse_json_matrix(field(v, "linear")?, "linear")?;
    let translation_v = parse_json_vector(field(v, "translation_v")?, "translation_v")?;
    let basis_f = field(v, "basis_f")?
        .as_array()
        .ok_or_else(|| "certificate: basis_f must be an array".to_string())?
        .iter()
        .map(|row| parse_json_vector(row, "basis_f"))
        .collect::<Result<Vec<_>, _>>()?;
    let constraint_values = field(v, "constraint_values")?
        .as_array()
        .ok_or_else(|| "certificate: constraint_values must be an array".to_string())?
        .iter()
        .map(|c| parse_json_gaussian(c, "constraint_values"))
        .collect::<Result<Vec<_>, _>>()?;
    let explicit_lambda = match field(v, "explicit_lambda")? {
        Value::Null => None,
        Value::Array(items) => {
            let values = items
                .iter()
                .map(|c| parse_json_gaussian(c, "explicit_lambda"))
                .collect::<Result<Vec<_>, _>>()?;
            Some(
                ScalarTuple::try_new(values)
                    .map_err(|_| "certificate: explicit_lambda contains a zero".to_string())?,
            )
        }
        _ => return Err("certificate: explicit_lambda must be an array or null".to_string()),
    };
    let proportionality = match field(v, "proportionality")? {
        Value::Null => None,
        obj @ Value::Object(_) => {
            let alpha = parse_json_gaussian(field(obj, "alpha")?, "proportionality alpha")?;
            let w = parse_json_vector(field(obj, "v")?, "proportionality v")?;
            Some((alpha, w))
        }
        _ => return Err("certificate: proportionality must be an object or null".to_string()),
    };
    Ok(AutoCertificate {
        linear,
        basis_f,
        constraint_values,
        explicit_lambda,
        translation_v,
        proportionality,
    })
}
