use std::path::PathBuf;

use adlv_core::building_geometry::Hyperplane;
use adlv_core::finite_flag_lab::{lusztig_containment_check, moore_cross_check};
use adlv_core::sigma_structures::{CoxeterDatum, EOElement};
use adlv_core::{AffineElement, AffineWeyl, Error, NodeSet, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::DatumConfig;
use crate::record::{self, ResultRecord, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Adm,
    Eo,
    SigmaW,
    Gate,
    Cone,
    DrEnum,
    Rational,
    Straight,
    Separator,
    BtCheck,
    DlCheck,
    Moore,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }
}

#[derive(Clone, Debug, Default, Args, Serialize)]
pub struct Options {
    /// TOML datum description with keys type, rank, sigma, mu, removed_node, preset.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// example-3.1, example-3.2 or example-1.3.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Overrides the rank of the datum or preset.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Length bound for enumerations.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Keep only rational alcoves at least this far from the finite walls.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
    /// Finite field F_{p^m}.
    #[arg(long, num_args = 2, value_names = ["P", "M"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<u32>>,
    /// Length bound for separator candidates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_radius: Option<usize>,
    /// Dimension for dl-check and moore.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Affine node indices, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Omega part k of the element tau^k.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    /// Base alcove as a word.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    /// Residue type as a comma separated node list.
    #[arg(long = "parabolic")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<String>,
    /// Finite Weyl group element as a word in nodes 1..=rank.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    /// Hyperplanes as `root:k` pairs, comma separated; root indexes the positive roots.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walls: Option<String>,
    /// Index into the EO list.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eo: Option<usize>,
    /// Index of the second EO element.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eo2: Option<usize>,
    /// Rational translate of the second stratum, as a word.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jprime: Option<String>,
}

pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad node index {t:?}")))
        })
        .collect()
}

fn parse_walls(s: &str) -> Result<Vec<Hyperplane>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || Error::InvalidArgument(format!("bad hyperplane {t:?}, expected root:k"));
            let (a, k) = t.split_once(':').ok_or_else(bad)?;
            Ok(Hyperplane {
                alpha: a.parse().map_err(|_| bad())?,
                k: k.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn nodeset(v: &[usize]) -> NodeSet {
    let mut s = NodeSet::default();
    for &i in v {
        s.insert(i);
    }
    s
}

pub fn load_config(opts: &Options) -> Result<DatumConfig> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            DatumConfig::parse(&text)?
        }
        None => DatumConfig::default(),
    };
    if opts.preset.is_some() {
        cfg.preset = opts.preset.clone();
    }
    if opts.rank.is_some() {
        cfg.rank = opts.rank;
    }
    Ok(cfg)
}

fn uses_datum(cmd: Command) -> bool {
    !matches!(cmd, Command::DlCheck | Command::Moore)
}

/// The echo of the inputs placed in every record.
pub fn input_echo(cmd: Command, opts: &Options) -> Value {
    let mut m = match serde_json::to_value(opts) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    if uses_datum(cmd) {
        if let Ok(cfg) = load_config(opts).and_then(|c| c.expand()) {
            m.remove("preset");
            m.remove("rank");
            m.insert("datum".into(), serde_json::to_value(cfg).unwrap());
        }
    }
    Value::Object(m)
}

pub fn error_record(cmd: &str, input: Value, err: &str) -> ResultRecord {
    ResultRecord {
        command: cmd.into(),
        input,
        payload: json!({ "error": err }),
        status: Status::Error,
    }
}

struct Ctx {
    cmd: Command,
    input: Value,
    out: Vec<ResultRecord>,
}

impl Ctx {
    fn emit(&mut self, payload: Value, status: Status) {
        self.out.push(ResultRecord {
            command: self.cmd.name(),
            input: self.input.clone(),
            payload,
            status,
        });
    }
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn pass(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn word_opt(s: &Option<String>) -> Result<Vec<usize>> {
    s.as_deref().map_or(Ok(Vec::new()), parse_list)
}

fn alcove(g: &AffineWeyl, s: &Option<String>) -> Result<AffineElement> {
    g.mul_word(&word_opt(s)?)
}

fn eo_payload(cd: &CoxeterDatum, idx: usize, e: &EOElement) -> Value {
    with(
        record::element(cd.weyl(), &e.w),
        json!({
            "index": idx,
            "sigma_support": record::nodes(e.sigma_supp),
            "sigma_w": record::nodes(e.sigma_w),
        }),
    )
}

fn field_args(opts: &Options) -> Result<(usize, u32, u32)> {
    let n = opts.n.unwrap_or(3);
    let (p, m) = match opts.field.as_deref() {
        Some([p, m]) => (*p, *m),
        None => (2, 3),
        _ => return Err(Error::InvalidArgument("--field takes p and m".into())),
    };
    Ok((n, p, m))
}

pub fn run(cmd: Command, opts: &Options) -> Result<Vec<ResultRecord>> {
    let cfg = load_config(opts)?;
    let mut ctx = Ctx {
        cmd,
        input: input_echo(cmd, opts),
        out: Vec::new(),
    };
    match cmd {
        Command::Adm => {
            let g = AffineWeyl::new(cfg.root_datum()?);
            let mut xs = g.admissible_set(&cfg.mu()?)?;
            g.sort_canonical(&mut xs);
            for x in &xs {
                ctx.emit(record::element(&g, x), Status::Ok);
            }
        }
        Command::Eo => {
            let cd = cfg.coxeter_datum()?;
            for (i, e) in cd.enumerate_eo()?.iter().enumerate() {
                ctx.emit(eo_payload(&cd, i, e), Status::Ok);
            }
        }
        Command::SigmaW => {
            let cd = cfg.coxeter_datum()?;
            let g = cd.weyl();
            let word = parse_list(
                opts.word
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("sigma-w needs --word".into()))?,
            )?;
            let w = g.from_word(&word, opts.omega.unwrap_or(cd.tau_class()))?;
            let in_eo = cd.enumerate_eo()?.iter().any(|e| e.w == w);
            ctx.emit(
                with(
                    record::element(g, &w),
                    json!({
                        "sigma_support": record::nodes(cd.sigma_support(&w)),
                        "sigma_w": record::nodes(cd.sigma_w_of(&w)),
                        "sigma_coxeter": cd.is_sigma_coxeter(&w),
                        "in_eo": in_eo,
                    }),
                ),
                Status::Ok,
            );
        }
        Command::Gate => {
            let g = AffineWeyl::new(cfg.root_datum()?);
            let b = alcove(&g, &opts.word)?;
            let base = alcove(&g, &opts.base)?;
            let p = nodeset(&parse_list(opts.parabolic.as_deref().ok_or_else(|| {
                Error::InvalidArgument("gate needs --parabolic".into())
            })?)?);
            let r = g.residue(&base, p)?;
            let gate = g.gate(&b, &r);
            let members = g.residue_members(&r)?;
            let d = g.gallery_distance(&b, &gate);
            let additive = members
                .iter()
                .all(|h| g.gallery_distance(&b, h) == d + g.gallery_distance(&gate, h));
            let factorizes = members.iter().all(|h| {
                g.weyl_distance(&b, h) == g.mul(&g.weyl_distance(&b, &gate), &g.weyl_distance(&gate, h))
            });
            ctx.emit(
                json!({
                    "gate": record::element(&g, &gate),
                    "distance": d,
                    "residue_size": members.len(),
                    "additive": additive,
                    "factorizes": factorizes,
                }),
                pass(additive && factorizes),
            );
        }
        Command::Cone => {
            let g = AffineWeyl::new(cfg.root_datum()?);
            let b = alcove(&g, &opts.base)?;
            let w = g.finite_from_word(&word_opt(&opts.direction)?)?;
            let mut members = Vec::new();
            for y in g.wa_ball(opts.radius.unwrap_or(3)) {
                let x = g.mul(&b, &y);
                if g.acute_cone_member(&b, &w, &x)? {
                    members.push(x);
                }
            }
            g.sort_canonical(&mut members);
            for x in &members {
                ctx.emit(
                    with(record::element(&g, x), json!({ "distance": g.gallery_distance(&b, x) })),
                    Status::Ok,
                );
            }
        }
        Command::DrEnum => {
            let g = AffineWeyl::new(cfg.root_datum()?);
            let walls = word_walls(opts)?;
            let n = g.root_datum().num_positive_roots();
            if let Some(h) = walls.iter().find(|h| h.alpha >= n) {
                return Err(Error::InvalidArgument(format!(
                    "root index {} out of range 0..{n}",
                    h.alpha
                )));
            }
            let e = g.enumerate_dr_subset(&walls, opts.radius.unwrap_or(8));
            ctx.emit(
                json!({
                    "walls": walls.iter().map(|h| json!([h.alpha, h.k])).collect::<Vec<_>>(),
                    "radius": e.radius,
                    "alcoves": e.alcoves.iter().map(|x| record::element(&g, x)).collect::<Vec<_>>(),
                    "count_at_radius": e.count_at_radius,
                    "count_at_radius_minus_two": e.count_at_radius_minus_two,
                    "stabilized": e.stabilized,
                }),
                pass(e.stabilized),
            );
        }
        Command::Rational => {
            let cd = cfg.coxeter_datum()?;
            let g = cd.weyl();
            let k = cd.k();
            for x in cd.rational_elements(opts.radius.unwrap_or(4)) {
                if let Some(m) = opts.margin {
                    if !g.far_from_walls(&x, k, m)? {
                        continue;
                    }
                }
                ctx.emit(
                    with(
                        record::element(g, &x),
                        json!({ "wall_distance": record::rational(g.wall_distance(&x, k)?) }),
                    ),
                    Status::Ok,
                );
            }
        }
        Command::Straight => {
            let cd = cfg.coxeter_datum()?;
            let g = cd.weyl();
            let candidates = match &opts.word {
                Some(w) => vec![g.from_word(&parse_list(w)?, opts.omega.unwrap_or(cd.tau_class()))?],
                None => {
                    let mut xs = Vec::new();
                    for k in 0..g.omega_order() {
                        let om = g.omega_element(k)?;
                        xs.extend(g.wa_ball(opts.radius.unwrap_or(2)).iter().map(|x| g.mul(x, &om)));
                    }
                    g.sort_canonical(&mut xs);
                    xs
                }
            };
            let single = opts.word.is_some();
            for w in &candidates {
                let r = cd.sigma_straight_report(w);
                if single || r.straight {
                    ctx.emit(
                        with(
                            record::element(g, w),
                            json!({
                                "straight": r.straight,
                                "direct": r.direct,
                                "newton": r.newton,
                                "period": r.period,
                                "newton_denominator": r.newton_denominator,
                            }),
                        ),
                        Status::Ok,
                    );
                }
            }
        }
        Command::Separator => {
            let cd = cfg.coxeter_datum()?;
            let g = cd.weyl();
            let eo = cd.enumerate_eo()?;
            let pick = |i: usize| {
                eo.get(i).ok_or_else(|| {
                    Error::InvalidArgument(format!("EO index {i} out of range 0..{}", eo.len()))
                })
            };
            let (i1, i2) = (opts.eo.unwrap_or(0), opts.eo2.or(opts.eo).unwrap_or(0));
            let (e1, e2) = (pick(i1)?, pick(i2)?);
            let jp = alcove(g, &opts.jprime)?;
            let s = cd.find_separator(e1, e2, &jp, opts.search_radius.unwrap_or(12))?;
            let c = &s.certificate;
            let k = cd.k();
            let confirmed = cd.stratum_value(e1, &g.identity(), &s.j) != cd.stratum_value(e2, &jp, &s.j);
            ctx.emit(
                json!({
                    "eo": eo_payload(&cd, i1, e1),
                    "eo2": eo_payload(&cd, i2, e2),
                    "jprime": record::element(g, &jp),
                    "j": record::element(g, &s.j),
                    "val1": record::element(g, &s.val1),
                    "val2": record::element(g, &s.val2),
                    "scanned": s.scanned,
                    "confirmed": confirmed,
                    "certificate": {
                        "swapped": c.swapped,
                        "translated_case": c.translated_case,
                        "w1": record::element(g, &c.w1),
                        "w2": record::element(g, &c.w2),
                        "w3": record::element(g, &c.w3),
                        "chain": c.chain,
                        "chain_ok": c.chain_ok,
                        "support_ok": c.support_ok,
                        "all_u_ok": c.all_u_ok,
                        "route_matches": c.route_matches,
                        "inequality_holds": c.inequality_holds,
                        "margin": c.margin,
                        "far": c.far,
                        "wall_distance": record::rational(g.wall_distance(&s.j, k)?),
                    },
                }),
                pass(confirmed && c.inequality_holds),
            );
        }
        Command::BtCheck => {
            let cd = cfg.coxeter_datum()?;
            let g = cd.weyl();
            let rep = cd.bt_vs_j_check(opts.radius.unwrap_or(4), opts.search_radius.unwrap_or(12))?;
            ctx.emit(
                json!({
                    "labels": rep.labels.iter().map(|l| json!({
                        "eo": l.eo,
                        "coset_rep": record::element(g, &l.coset_rep),
                    })).collect::<Vec<_>>(),
                    "pairs": rep.pairs,
                    "separated": rep.separated,
                    "certificates_ok": rep.certificates_ok,
                    "max_separator_length": rep.max_separator_length,
                    "failures": rep.failures.iter().map(|f| json!({
                        "a": f.a, "b": f.b, "reason": f.reason,
                    })).collect::<Vec<_>>(),
                }),
                pass(rep.success()),
            );
        }
        Command::DlCheck => {
            let (n, p, m) = field_args(opts)?;
            let rep = lusztig_containment_check(n, p, m)?;
            ctx.emit(
                json!({
                    "n": rep.n, "p": rep.p, "m": rep.m,
                    "points": rep.points, "violations": rep.violations,
                }),
                pass(rep.passed()),
            );
        }
        Command::Moore => {
            let (n, p, m) = field_args(opts)?;
            let rep = moore_cross_check(n, p, m)?;
            ctx.emit(
                json!({
                    "n": rep.n, "p": rep.p, "m": rep.m,
                    "vectors": rep.vectors, "independent": rep.independent,
                    "mismatches": rep.mismatches,
                }),
                pass(rep.passed()),
            );
        }
    }
    Ok(ctx.out)
}

fn word_walls(opts: &Options) -> Result<Vec<Hyperplane>> {
    opts.walls.as_deref().map_or(Ok(Vec::new()), parse_walls)
}
