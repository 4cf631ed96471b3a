//! Batch command-line surface for the fockkit library: exact-rational
//! inputs, JSON or CSV output, deterministic byte-for-byte reruns, and
//! an optional persistent Kazhdan-Lusztig polynomial cache.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use fockkit::affine::{AffinePermutation, AffineWeight, KappaMode, LinkageContext};
use fockkit::category_o::{
    cherednik_order, theta, theta_pairing_identity, CherednikParams, StandardOrder,
};
use fockkit::cherednik::{
    euler_grading_check, param_convert, verify_relations, verify_relations_negative_control,
    CycloNumber, DunklParams, RelationReport,
};
use fockkit::combinatorics::{Composition, MultiPartition, Partition};
use fockkit::fock::{
    alpha_map, bijection_a7, canonical_gminus, chevalley_standard, chevalley_wedge, decode_index,
    decomposition_matrices, index_from_phi, inverse_a7, inverse_alpha, transposed_decomposition,
    underline_alpha, Chevalley, WedgeVector,
};
use fockkit::kl::{character_matrix, GroupKind, KlEngine};
use fockkit::rat::{format_rat, parse_rat, Rat};
use fockkit::{Error, Result};

// ---- argument parsing ----------------------------------------------------

#[derive(Clone)]
struct IntList(Vec<i64>);

#[derive(Clone)]
struct NatList(Vec<u32>);

#[derive(Clone)]
struct UsizeList(Vec<usize>);

#[derive(Clone)]
struct RatList(Vec<Rat>);

#[derive(Clone)]
struct MpArg(MultiPartition);

fn split_list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').collect()
    }
}

fn parse_int_list(s: &str) -> std::result::Result<IntList, String> {
    split_list(s)
        .iter()
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(IntList)
}

fn parse_nat_list(s: &str) -> std::result::Result<NatList, String> {
    split_list(s)
        .iter()
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(NatList)
}

fn parse_usize_list(s: &str) -> std::result::Result<UsizeList, String> {
    split_list(s)
        .iter()
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(UsizeList)
}

fn parse_rat_arg(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn parse_rat_list(s: &str) -> std::result::Result<RatList, String> {
    split_list(s)
        .iter()
        .map(|t| parse_rat(t.trim()).map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(RatList)
}

/// Multipartitions on the command line: components separated by `|`,
/// parts by commas, e.g. `2,1|3|` for ((2,1),(3),()).
fn parse_mp(s: &str) -> std::result::Result<MpArg, String> {
    let rows: Vec<Vec<u32>> = s
        .split('|')
        .map(|comp| {
            split_list(comp)
                .iter()
                .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
                .collect()
        })
        .collect::<std::result::Result<_, String>>()?;
    MultiPartition::from_rows(&rows)
        .map(MpArg)
        .map_err(|e| e.to_string())
}

// ---- command definitions ---------------------------------------------------

#[derive(Parser)]
#[command(
    name = "fockkit",
    version,
    about = "Exact higher-level Fock-space combinatorics, Kazhdan-Lusztig polynomials, \
             decomposition matrices, and Dunkl-operator checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    /// Kazhdan-Lusztig cache file (overrides the FOCKKIT_CACHE variable).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Finite,
    Affine,
}

impl From<KindArg> for GroupKind {
    fn from(k: KindArg) -> GroupKind {
        match k {
            KindArg::Finite => GroupKind::Finite,
            KindArg::Affine => GroupKind::Affine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    /// Raising operator.
    E,
    /// Lowering operator.
    F,
}

impl From<OpKind> for Chevalley {
    fn from(k: OpKind) -> Chevalley {
        match k {
            OpKind::E => Chevalley::E,
            OpKind::F => Chevalley::F,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Presentation {
    Wedge,
    Standard,
}

/// Cherednik parameters, given either additively (`--h`, `--hs`) or
/// through a block composition and level (`--nu`, `--kappa`).
#[derive(Args, Clone)]
struct ParamArgs {
    /// Hecke-side parameter h.
    #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
    h: Option<Rat>,
    /// Component parameters h_1,...,h_(l-1) (empty for level one).
    #[arg(long, value_parser = parse_rat_list, allow_hyphen_values = true)]
    hs: Option<RatList>,
    /// Block composition.
    #[arg(long, value_parser = parse_nat_list)]
    nu: Option<NatList>,
    /// Nonzero level parameter kappa.
    #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
    kappa: Option<Rat>,
}

impl ParamArgs {
    fn build(&self) -> Result<CherednikParams> {
        match (&self.nu, self.kappa) {
            (Some(nu), Some(kappa)) => {
                if self.h.is_some() || self.hs.is_some() {
                    return Err(Error::InvalidInput(
                        "give either --nu/--kappa or --h/--hs, not both".into(),
                    ));
                }
                CherednikParams::from_nu_kappa(&Composition::new(&nu.0), kappa)
            }
            (None, None) => {
                let h = self.h.ok_or_else(|| {
                    Error::InvalidInput("need --h (with optional --hs) or --nu with --kappa".into())
                })?;
                let head = self.hs.clone().map(|x| x.0).unwrap_or_default();
                Ok(CherednikParams::from_h_head(h, &head))
            }
            _ => Err(Error::InvalidInput("--nu and --kappa go together".into())),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Split a wedge index a = c + e(p-1) + e*l*r into its parts.
    Decode {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        l: u32,
    },
    /// Rebuild a wedge index from its in-block position and block.
    Encode {
        #[arg(long, allow_hyphen_values = true)]
        phi: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        l: u32,
    },
    /// Split a strictly decreasing tuple into charged blocks; with
    /// --invert, rebuild the tuple from block data and --nu.
    #[command(name = "bij-a7")]
    BijA7 {
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        alpha: IntList,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        invert: bool,
        /// Block sizes (with --invert only).
        #[arg(long, value_parser = parse_nat_list)]
        nu: Option<NatList>,
    },
    /// Charged shift of a dominant block vector; --invert undoes it.
    Alpha {
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        lambda: IntList,
        #[arg(long, value_parser = parse_nat_list)]
        nu: NatList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        s: IntList,
        #[arg(long)]
        invert: bool,
    },
    /// Strictly decreasing charged tuple attached to a block vector.
    #[command(name = "underline-alpha")]
    UnderlineAlpha {
        #[arg(long)]
        e: u32,
        /// Number of blocks; checked against --nu when given.
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, value_parser = parse_nat_list)]
        nu: NatList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        s: IntList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        lambda: IntList,
    },
    /// Apply a Chevalley operator in either presentation.
    Chevalley {
        #[arg(long, value_enum)]
        op: OpKind,
        /// Residue index of the operator, in 0..e.
        #[arg(long)]
        b: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, value_enum, default_value_t = Presentation::Wedge)]
        presentation: Presentation,
        /// Basis wedge (strictly decreasing indices); wedge presentation.
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        tuple: Option<IntList>,
        /// Dominant block vector; standard presentation.
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        lambda: Option<IntList>,
        #[arg(long, value_parser = parse_nat_list)]
        nu: Option<NatList>,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        s: Option<IntList>,
    },
    /// Canonical-basis expansion of one dominant block vector.
    Gminus {
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        lambda: IntList,
        /// Charge blocks; the composition doubles as the charge tuple.
        #[arg(long, value_parser = parse_nat_list)]
        s: NatList,
        #[arg(long)]
        e: u32,
    },
    /// Decomposition matrices of all multipartitions of n at charge s.
    Decomp {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_nat_list)]
        s: NatList,
        #[arg(long)]
        e: u32,
    },
    /// Nonnegative transposed-family matrix at the negated charge.
    Yvonne {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_nat_list)]
        s: NatList,
        #[arg(long)]
        e: u32,
    },
    /// Kazhdan-Lusztig polynomial of a pair of window elements.
    Kl {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        v: IntList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        w: IntList,
    },
    /// Parabolic Kazhdan-Lusztig polynomial (negative convention).
    Pkl {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: usize,
        /// Parabolic generator indices.
        #[arg(long, value_parser = parse_usize_list)]
        j: UsizeList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        v: IntList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        w: IntList,
    },
    /// Character and multiplicity matrices of a block family.
    Charmat {
        #[arg(long, value_parser = parse_nat_list)]
        nu: NatList,
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        kappa: Rat,
        /// Integral classical weight at level kappa - m; repeatable.
        #[arg(long = "target", value_parser = parse_int_list, allow_hyphen_values = true, action = clap::ArgAction::Append, required = true)]
        targets: Vec<IntList>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Grading scalar of a standard label.
    Theta {
        /// Multipartition, components separated by `|`.
        #[arg(long, value_parser = parse_mp)]
        mp: MpArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compare two standard labels by their grading scalars.
    Order {
        #[arg(long, value_parser = parse_mp)]
        left: MpArg,
        #[arg(long, value_parser = parse_mp)]
        right: MpArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Pairing identity for two labels in one block family.
    #[command(name = "check63")]
    Check63 {
        #[arg(long, value_parser = parse_mp)]
        left: MpArg,
        #[arg(long, value_parser = parse_mp)]
        right: MpArg,
        #[arg(long, value_parser = parse_nat_list)]
        nu: NatList,
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        kappa: Rat,
    },
    /// Linkage order between two integral dominant weights.
    #[command(name = "triangle-order")]
    TriangleOrder {
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        x: IntList,
        #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
        y: IntList,
        #[arg(long, value_parser = parse_nat_list)]
        nu: NatList,
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        kappa: Rat,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Verify the defining relations of the Dunkl operators.
    #[command(name = "dunkl-check")]
    DunklCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        k: Rat,
        /// Charge parameters gamma_1,...,gamma_(l-1).
        #[arg(long, value_parser = parse_rat_list, allow_hyphen_values = true)]
        gamma: Option<RatList>,
        #[arg(long, default_value_t = 3)]
        maxdeg: u32,
        /// Shift k inside the operators only (negative control).
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        perturb_k: Option<Rat>,
    },
    /// Verify the Euler grading of the Dunkl pairing.
    #[command(name = "euler-check")]
    EulerCheck {
        #[arg(long)]
        n: usize,
        /// Number of charge components; checked against --hs when given.
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, value_parser = parse_rat_arg, allow_hyphen_values = true)]
        h: Rat,
        #[arg(long, value_parser = parse_rat_list, allow_hyphen_values = true)]
        hs: Option<RatList>,
        #[arg(long, default_value_t = 2)]
        maxdeg: u32,
    },
    /// Translate additive parameters to the multiplicative side.
    Params {
        #[command(flatten)]
        params: ParamArgs,
    },
}

// ---- output plumbing -------------------------------------------------------

/// A command result in both shapes: a JSON value (keys sort on
/// serialization) and CSV rows.
struct Render {
    json: Value,
    rows: Vec<Vec<String>>,
}

impl Render {
    fn scalar(json: Value, cell: String) -> Render {
        Render {
            json,
            rows: vec![vec![cell]],
        }
    }

    fn int_row(values: &[i64]) -> Render {
        Render {
            json: json!(values),
            rows: vec![values.iter().map(|x| x.to_string()).collect()],
        }
    }

    /// Key/value object rendered as a header row plus a value row.
    fn record(pairs: &[(&str, Value)]) -> Render {
        let mut obj = Map::new();
        let mut header = Vec::new();
        let mut row = Vec::new();
        for (k, v) in pairs {
            obj.insert((*k).to_string(), v.clone());
            header.push((*k).to_string());
            row.push(csv_cell(v));
        }
        Render {
            json: Value::Object(obj),
            rows: vec![header, row],
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn int_matrix_rows(m: &[Vec<i64>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect()
}

fn mp_json(mp: &MultiPartition) -> Value {
    Value::Array(
        mp.components()
            .iter()
            .map(|p: &Partition| json!(p.parts()))
            .collect(),
    )
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn cyclo_json(c: &CycloNumber) -> Value {
    json!(rat_strings(c.coeffs()))
}

/// Term list (coefficient + index tuple), one row per term.
fn render_terms(terms: &[(Vec<i64>, i64)]) -> Render {
    let json = Value::Array(
        terms
            .iter()
            .map(|(t, c)| json!({"coeff": c, "tuple": t}))
            .collect(),
    );
    let rows = terms
        .iter()
        .map(|(t, c)| {
            let mut row = vec![c.to_string()];
            row.extend(t.iter().map(|x| x.to_string()));
            row
        })
        .collect();
    Render { json, rows }
}

fn render_report(report: &RelationReport) -> Render {
    let mut relations = Map::new();
    let mut witnesses = Map::new();
    let mut rows = Vec::new();
    for c in &report.checks {
        let verdict = if c.passed { "pass" } else { "fail" };
        relations.insert(c.name.clone(), Value::String(verdict.to_string()));
        if let Some(w) = &c.witness {
            witnesses.insert(c.name.clone(), Value::String(w.clone()));
        }
        rows.push(vec![
            c.name.clone(),
            verdict.to_string(),
            c.witness.clone().unwrap_or_default(),
        ]);
    }
    Render {
        json: json!({
            "all_passed": report.all_passed(),
            "relations": Value::Object(relations),
            "witnesses": Value::Object(witnesses),
        }),
        rows,
    }
}

// ---- engine plumbing ---------------------------------------------------------

fn cache_path(flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone()
        .or_else(|| std::env::var_os("FOCKKIT_CACHE").map(PathBuf::from))
}

fn open_engine(kind: GroupKind, m: usize, cache: &Option<PathBuf>) -> Result<KlEngine> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "group rank must be at least 2, got {m}"
        )));
    }
    match cache_path(cache) {
        Some(p) => KlEngine::with_cache(kind, m, &p),
        None => Ok(KlEngine::new(kind, m)),
    }
}

fn window(list: &IntList, m: usize) -> Result<AffinePermutation> {
    if list.0.len() != m {
        return Err(Error::InvalidInput(format!(
            "window {:?} does not have length {m}",
            list.0
        )));
    }
    AffinePermutation::new(list.0.clone())
}

// ---- dispatch ---------------------------------------------------------------

fn run(cmd: &Cmd, cache: &Option<PathBuf>) -> Result<Render> {
    match cmd {
        Cmd::Decode { a, e, l } => {
            let d = decode_index(*a, *e, *l)?;
            Ok(Render::record(&[
                ("c", json!(d.c)),
                ("p", json!(d.p)),
                ("phi", json!(d.phi)),
                ("r", json!(d.r)),
            ]))
        }
        Cmd::Encode { phi, p, e, l } => {
            let a = index_from_phi(*phi, *p, *e, *l)?;
            Ok(Render::scalar(json!(a), a.to_string()))
        }
        Cmd::BijA7 {
            alpha,
            e,
            l,
            invert,
            nu,
        } => {
            if *invert {
                let nu = nu.as_ref().ok_or_else(|| {
                    Error::InvalidInput("--invert needs the block sizes --nu".into())
                })?;
                let blocks = Composition::new(&nu.0);
                let underline = inverse_a7(&alpha.0, &blocks, *e, *l)?;
                Ok(Render::int_row(&underline))
            } else {
                let (blocks, shifted) = bijection_a7(&alpha.0, *e, *l)?;
                // Blocks are reported in the same order the shifted
                // vector is concatenated, so the pair feeds straight
                // back into --invert.
                Ok(Render::record(&[
                    ("alpha", json!(shifted)),
                    ("nu", json!(blocks.reversed().parts())),
                ]))
            }
        }
        Cmd::Alpha {
            lambda,
            nu,
            s,
            invert,
        } => {
            let blocks = Composition::new(&nu.0);
            let image = if *invert {
                inverse_alpha(&lambda.0, &blocks, &s.0)?
            } else {
                alpha_map(&lambda.0, &blocks, &s.0)?
            };
            Ok(Render::int_row(&image))
        }
        Cmd::UnderlineAlpha {
            e,
            l,
            nu,
            s,
            lambda,
        } => {
            let blocks = Composition::new(&nu.0);
            if let Some(l) = l {
                if *l as usize != blocks.len() {
                    return Err(Error::InvalidInput(format!(
                        "--l {l} does not match the {} blocks of --nu",
                        blocks.len()
                    )));
                }
            }
            let underline = underline_alpha(&lambda.0, &blocks, &s.0, *e)?;
            Ok(Render::int_row(&underline))
        }
        Cmd::Chevalley {
            op,
            b,
            e,
            l,
            presentation,
            tuple,
            lambda,
            nu,
            s,
        } => match presentation {
            Presentation::Wedge => {
                let tuple = tuple.as_ref().ok_or_else(|| {
                    Error::InvalidInput("wedge presentation needs --tuple".into())
                })?;
                let v = WedgeVector::basis(&tuple.0)?;
                let image = chevalley_wedge((*op).into(), *b, &v, *e, *l)?;
                let terms: Vec<(Vec<i64>, i64)> =
                    image.terms().map(|(t, c)| (t.clone(), c)).collect();
                Ok(render_terms(&terms))
            }
            Presentation::Standard => {
                let (lambda, nu, s) = match (lambda, nu, s) {
                    (Some(lambda), Some(nu), Some(s)) => (lambda, nu, s),
                    _ => {
                        return Err(Error::InvalidInput(
                            "standard presentation needs --lambda, --nu, and --s".into(),
                        ))
                    }
                };
                let blocks = Composition::new(&nu.0);
                if blocks.len() != *l as usize {
                    return Err(Error::InvalidInput(format!(
                        "--l {l} does not match the {} blocks of --nu",
                        blocks.len()
                    )));
                }
                let images = chevalley_standard((*op).into(), *b, &lambda.0, &blocks, &s.0, *e)?;
                let terms: Vec<(Vec<i64>, i64)> =
                    images.into_iter().map(|t| (t, 1)).collect();
                Ok(render_terms(&terms))
            }
        },
        Cmd::Gminus { lambda, s, e } => {
            let blocks = Composition::new(&s.0);
            let charge: Vec<i64> = s.0.iter().map(|&x| i64::from(x)).collect();
            let m = blocks.total() as usize;
            let engine = open_engine(GroupKind::Affine, m.max(2), cache)?;
            let expansion = canonical_gminus(&engine, &lambda.0, &blocks, &charge, *e)?;
            engine.save_cache()?;
            let json = Value::Array(
                expansion
                    .terms
                    .iter()
                    .zip(&expansion.terms_poly)
                    .map(|((t, c), (_, p))| json!({"coeff": c, "poly": p.coeffs(), "tuple": t}))
                    .collect(),
            );
            let rows = expansion
                .terms
                .iter()
                .map(|(t, c)| {
                    let mut row = vec![c.to_string()];
                    row.extend(t.iter().map(|x| x.to_string()));
                    row
                })
                .collect();
            Ok(Render { json, rows })
        }
        Cmd::Decomp { n, s, e } => {
            let blocks = Composition::new(&s.0);
            let m = blocks.total() as usize;
            let engine = open_engine(GroupKind::Affine, m.max(2), cache)?;
            let dm = decomposition_matrices(&engine, *n, &blocks, *e)?;
            engine.save_cache()?;
            let labels: Vec<Value> = dm.labels.iter().map(mp_json).collect();
            Ok(Render {
                json: json!({
                    "charge": dm.charge,
                    "delta": dm.delta,
                    "labels": labels,
                    "nabla": dm.nabla,
                }),
                rows: int_matrix_rows(&dm.nabla),
            })
        }
        Cmd::Yvonne { n, s, e } => {
            let blocks = Composition::new(&s.0);
            let m = blocks.total() as usize;
            let engine = open_engine(GroupKind::Affine, m.max(2), cache)?;
            let td = transposed_decomposition(&engine, *n, &blocks, *e)?;
            engine.save_cache()?;
            let labels: Vec<Value> = td.labels.iter().map(mp_json).collect();
            Ok(Render {
                json: json!({
                    "charge": td.charge,
                    "labels": labels,
                    "matrix": td.matrix,
                }),
                rows: int_matrix_rows(&td.matrix),
            })
        }
        Cmd::Kl { kind, m, v, w } => {
            let engine = open_engine((*kind).into(), *m, cache)?;
            let v = window(v, *m)?;
            let w = window(w, *m)?;
            let p = engine.kl_poly(&v, &w)?;
            engine.save_cache()?;
            Ok(Render::int_row(p.coeffs()))
        }
        Cmd::Pkl { kind, m, j, v, w } => {
            let engine = open_engine((*kind).into(), *m, cache)?;
            let j_set: BTreeSet<usize> = j.0.iter().copied().collect();
            let v = window(v, *m)?;
            let w = window(w, *m)?;
            let p = engine.parabolic_kl_minus(&j_set, &v, &w)?;
            engine.save_cache()?;
            Ok(Render::int_row(p.coeffs()))
        }
        Cmd::Charmat {
            nu,
            kappa,
            targets,
            budget,
        } => {
            let blocks = Composition::new(&nu.0);
            let m = blocks.total() as usize;
            let level = *kappa - fockkit::rat::rat(m as i128);
            let weights: Vec<AffineWeight> = targets
                .iter()
                .map(|t| AffineWeight::from_ints(&t.0, level))
                .collect();
            let engine = open_engine(GroupKind::Affine, m.max(2), cache)?;
            let cm = character_matrix(&engine, &blocks, *kappa, &weights, *budget)?;
            engine.save_cache()?;
            let labels: Vec<Value> = cm
                .labels
                .iter()
                .map(|w| json!(rat_strings(&w.classical)))
                .collect();
            let reps: Vec<Value> = cm.reps.iter().map(|v| json!(v.window())).collect();
            Ok(Render {
                json: json!({
                    "labels": labels,
                    "level": format_rat(&level),
                    "multiplicity": cm.multiplicity,
                    "reps": reps,
                    "simple_in_standard": cm.simple_in_standard,
                }),
                rows: int_matrix_rows(&cm.multiplicity),
            })
        }
        Cmd::Theta { mp, params } => {
            let params = params.build()?;
            let value = theta(&mp.0, &params)?.value;
            Ok(Render::scalar(
                json!({ "theta": format_rat(&value) }),
                format_rat(&value),
            ))
        }
        Cmd::Order {
            left,
            right,
            params,
        } => {
            let params = params.build()?;
            let order = cherednik_order(&left.0, &right.0, &params)?;
            let text = match order {
                StandardOrder::Equal => "equal",
                StandardOrder::LeftGreater => "left-greater",
                StandardOrder::RightGreater => "right-greater",
                StandardOrder::Incomparable => "incomparable",
            };
            Ok(Render::scalar(json!({ "order": text }), text.to_string()))
        }
        Cmd::Check63 {
            left,
            right,
            nu,
            kappa,
        } => {
            let blocks = Composition::new(&nu.0);
            let holds = theta_pairing_identity(&left.0, &right.0, &blocks, *kappa)?;
            Ok(Render::scalar(json!({ "holds": holds }), holds.to_string()))
        }
        Cmd::TriangleOrder {
            x,
            y,
            nu,
            kappa,
            budget,
        } => {
            let blocks = Composition::new(&nu.0);
            let m = blocks.total() as usize;
            let level = *kappa - fockkit::rat::rat(m as i128);
            let mut ctx = LinkageContext::new(blocks, KappaMode::Rational(*kappa));
            ctx.budget = *budget;
            let xw = AffineWeight::from_ints(&x.0, level);
            let yw = AffineWeight::from_ints(&y.0, level);
            let leq = ctx.leq(&xw, &yw)?;
            Ok(Render::scalar(json!({ "leq": leq }), leq.to_string()))
        }
        Cmd::DunklCheck {
            n,
            l,
            k,
            gamma,
            maxdeg,
            perturb_k,
        } => {
            let gamma = gamma.clone().map(|x| x.0).unwrap_or_default();
            let params = DunklParams::from_rationals(*l, *k, &gamma)?;
            let report = match perturb_k {
                Some(delta) => verify_relations_negative_control(*n, &params, *delta, *maxdeg)?,
                None => verify_relations(*n, &params, *maxdeg)?,
            };
            Ok(render_report(&report))
        }
        Cmd::EulerCheck {
            n,
            l,
            h,
            hs,
            maxdeg,
        } => {
            let head = hs.clone().map(|x| x.0).unwrap_or_default();
            if let Some(l) = l {
                if *l as usize != head.len() + 1 {
                    return Err(Error::InvalidInput(format!(
                        "--l {l} does not match the {} entries of --hs",
                        head.len()
                    )));
                }
            }
            let params = CherednikParams::from_h_head(*h, &head);
            let report = euler_grading_check(*n, &params, *maxdeg)?;
            Ok(render_report(&report))
        }
        Cmd::Params { params } => {
            let params = params.build()?;
            let converted = param_convert(&params);
            let gamma: Vec<Value> = converted.gamma.iter().map(cyclo_json).collect();
            let mut rows = vec![
                vec!["k".to_string(), format_rat(&converted.k)],
                vec![
                    "q_exponent".to_string(),
                    format_rat(&converted.q_exponent),
                ],
            ];
            for (i, q) in converted.q_p_exponents.iter().enumerate() {
                rows.push(vec![format!("q_{}_exponent", i + 1), format_rat(q)]);
            }
            for (i, g) in converted.gamma.iter().enumerate() {
                let mut row = vec![format!("gamma_{}", i + 1)];
                row.extend(rat_strings(g.coeffs()));
                rows.push(row);
            }
            Ok(Render {
                json: json!({
                    "gamma": gamma,
                    "k": format_rat(&converted.k),
                    "q_exponent": format_rat(&converted.q_exponent),
                    "q_p_exponents": rat_strings(&converted.q_p_exponents),
                }),
                rows,
            })
        }
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::NotNuRegular(_) => "not_nu_regular",
        Error::Unsupported(_) => "unsupported",
        Error::BudgetExceeded(_) => "budget_exceeded",
        Error::NotMinimalCosetRep(_) => "not_minimal_coset_rep",
        Error::InternalNonDivisible(_) => "internal_non_divisible",
        Error::Internal(_) => "internal",
    }
}

fn print_csv(rows: &[Vec<String>]) {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).expect("csv row");
    }
    let bytes = writer.into_inner().expect("csv buffer");
    print!("{}", String::from_utf8(bytes).expect("csv utf-8"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command, &cli.cache) {
        Ok(render) => {
            match cli.out {
                OutFormat::Json => println!("{}", render.json),
                OutFormat::Csv => print_csv(&render.rows),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!(
                "{}",
                json!({ "detail": e.to_string(), "error": error_code(&e) })
            );
            ExitCode::from(1)
        }
    }
}
