use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fpgroup::constructions::{
    enumerate_tubular_bundles, fibre_product_finite_quotient, fibre_product_generators, j_construction,
    rips_construction, tubular_bundle_presentation, uce_presentation, TubularBundleData,
};
use fpgroup::finite_quotients::{
    catalog_group, catalog_up_to, reidemeister_schreier, simple_quotients_up_to, todd_coxeter, EpiCountReport,
    PermGroup, QuotientVerdict, SearchConfig, CATALOG_BOUND,
};
use fpgroup::homology::{abelianization_invariants, h2_rank_2complex, smith_normal_form};
use fpgroup::pipeline::{fingerprint, pipeline_grothendieck, pipeline_theorem_b, PipelineConfig};
use fpgroup::presentations::{higman, parse_presentation, parse_word, parse_word_list, tietze_simplify, FinitePresentation};
use fpgroup::Error;

const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_REJECTED: u8 = 4;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "fpgroup", version, about = "Finitely presented groups: constructions and finite quotient evidence")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Global {
    /// Largest catalog group order to search (at most 2520)
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Alias for --bound
    #[arg(long, global = true)]
    max_order: Option<u64>,
    /// Comma-separated catalog groups, e.g. A5,PSL2_7
    #[arg(long, global = true)]
    groups: Option<String>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Abort searches after this many nodes and report "inconclusive"
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shift height for bundle enumeration
    #[arg(long, global = true)]
    height: Option<u32>,
    #[arg(long, global = true)]
    max_cosets: Option<usize>,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// File of `key = value` lines with defaults for the flags above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize a presentation, optionally Tietze-simplifying it
    Present {
        presentation: String,
        #[arg(long)]
        simplify: Option<usize>,
    },
    /// H1, the 2-complex H2 rank and the Euler characteristic
    Homology { presentation: String },
    /// Replace each relator by a copy of J glued along alpha
    Jcons {
        presentation: String,
        /// Defaults to Higman's group
        #[arg(long)]
        j: Option<String>,
        #[arg(long, default_value = "a1")]
        alpha: String,
    },
    /// Universal central extension of a perfect presentation
    Uce { presentation: String },
    /// Rips construction with a C'(1/6) certificate
    Rips { presentation: String },
    /// Direct product of two presentations
    Product { left: String, right: String },
    /// Fibre product of H -> H/<<kernel>> for a finite quotient, or the Rips
    /// fibre generators with --rips
    Fibre {
        presentation: String,
        /// Comma-separated kernel words
        #[arg(long, default_value = "")]
        kernel: String,
        #[arg(long)]
        rips: bool,
    },
    /// Exact hom and epi counts onto catalog groups
    EpiCount { presentation: String },
    /// Finite simple quotients up to the bound
    Quotients { presentation: String },
    /// Coset enumeration of a subgroup
    Coset {
        presentation: String,
        /// Comma-separated subgroup generators
        #[arg(long, default_value = "")]
        subgroup: String,
        /// Also print the Reidemeister-Schreier presentation
        #[arg(long)]
        rewrite: bool,
    },
    #[command(subcommand)]
    Bundle(BundleCommand),
    #[command(subcommand)]
    Pipeline(PipelineCommand),
}

#[derive(Subcommand)]
enum BundleCommand {
    /// List bundles of type (d; n, m) over (X, c) up to the shift height
    Enum {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Comma-separated words in a1..an, one per vertex space
        #[arg(long)]
        rho: String,
        /// Vertex presentation; defaults to Higman's group
        #[arg(long)]
        x: Option<String>,
        #[arg(long = "loop", default_value = "a1")]
        loop_word: String,
        /// Print only the count
        #[arg(long)]
        count: bool,
    },
    /// Presentation of a bundle given as JSON (inline or a file)
    Present { bundle: String },
    /// Fingerprint of a bundle given as JSON (inline or a file)
    Fingerprint { bundle: String },
}

#[derive(Subcommand)]
enum PipelineCommand {
    /// Rips, fibre product and quotient evidence for a perfect presentation
    Grothendieck { presentation: String },
    /// J-construction, UCE and tubular bundle fingerprints
    TheoremB { presentation: String },
}

/// Resolved settings: flags first, then the config file, then defaults.
struct Settings {
    bound: u64,
    groups: Option<Vec<String>>,
    search: SearchConfig,
    seed: u64,
    height: u32,
    max_cosets: usize,
    json: Option<PathBuf>,
}

fn read_config(path: &Path) -> anyhow::Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), i + 1))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn from_config<T: std::str::FromStr>(cfg: &HashMap<String, String>, key: &str) -> anyhow::Result<Option<T>> {
    cfg.get(key)
        .map(|v| v.parse::<T>().map_err(|_| anyhow!("config value for `{key}` is invalid: {v}")))
        .transpose()
}

impl Settings {
    fn resolve(g: &Global) -> anyhow::Result<Settings> {
        let cfg = match &g.config {
            Some(p) => read_config(p)?,
            None => HashMap::new(),
        };
        let bound = g
            .bound
            .or(g.max_order)
            .or(from_config(&cfg, "bound")?)
            .or(from_config(&cfg, "max-order")?)
            .unwrap_or(CATALOG_BOUND);
        let groups = g.groups.clone().or(from_config(&cfg, "groups")?).map(|s: String| {
            s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
        });
        let mut search = PipelineConfig::default().search;
        if let Some(w) = g.workers.or(from_config(&cfg, "workers")?) {
            search.workers = w.max(1);
        }
        if let Some(l) = g.node_limit.or(from_config(&cfg, "node-limit")?) {
            search.node_limit = Some(l);
        }
        Ok(Settings {
            bound,
            groups,
            search,
            seed: g.seed.or(from_config(&cfg, "seed")?).unwrap_or(0),
            height: g.height.or(from_config(&cfg, "height")?).unwrap_or(2),
            max_cosets: g.max_cosets.or(from_config(&cfg, "max-cosets")?).unwrap_or(100_000),
            json: g.json.clone().or(from_config::<String>(&cfg, "json")?.map(PathBuf::from)),
        })
    }

    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            bound: self.bound,
            height: self.height,
            seed: self.seed,
            max_cosets: self.max_cosets,
            search: self.search.clone(),
        }
    }

    fn catalog(&self) -> anyhow::Result<Vec<PermGroup>> {
        match &self.groups {
            Some(names) => Ok(names.iter().map(|n| catalog_group(n)).collect::<Result<_, _>>()?),
            None => Ok(catalog_up_to(self.bound)?),
        }
    }
}

/// A presentation given inline (`< … >`) or as a file path.
fn load_text(arg: &str) -> anyhow::Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('<') || trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn load(arg: &str) -> anyhow::Result<FinitePresentation> {
    Ok(parse_presentation(&load_text(arg)?)?)
}

fn load_bundle(arg: &str) -> anyhow::Result<TubularBundleData> {
    let text = load_text(arg)?;
    let b: TubularBundleData = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(b)
}

enum Outcome {
    Done,
    Inconclusive,
}

struct Output {
    text: Vec<String>,
    json: Value,
    outcome: Outcome,
}

impl Output {
    fn done(text: Vec<String>, json: Value) -> Self {
        Output { text, json, outcome: Outcome::Done }
    }
}

fn describe(p: &FinitePresentation) -> String {
    format!("{p}\n  generators: {}  relators: {}  euler characteristic: {}", p.ngens(), p.nrels(), p.euler_characteristic())
}

fn run(cli: &Cli, s: &Settings) -> anyhow::Result<Output> {
    Ok(match &cli.command {
        Command::Present { presentation, simplify } => {
            let mut p = load(presentation)?;
            if let Some(budget) = simplify {
                p = tietze_simplify(&p, *budget);
            }
            Output::done(vec![describe(&p)], json!({ "presentation": p, "generators": p.ngens(), "relators": p.nrels() }))
        }
        Command::Homology { presentation } => {
            let p = load(presentation)?;
            let h1 = abelianization_invariants(&p);
            let h2 = h2_rank_2complex(&p);
            let diag: Vec<String> = smith_normal_form(&p.exponent_matrix()).diagonal().iter().map(ToString::to_string).collect();
            Output::done(
                vec![
                    format!("H1 = {h1}"),
                    format!("h2_rank (2-complex) = {h2}"),
                    format!("euler characteristic = {}", p.euler_characteristic()),
                    format!("smith diagonal = [{}]", diag.join(", ")),
                ],
                json!({ "h1": h1, "h2_rank": h2, "euler_characteristic": p.euler_characteristic(), "smith_diagonal": diag }),
            )
        }
        Command::Jcons { presentation, j, alpha } => {
            let p = load(presentation)?;
            let j = match j {
                Some(j) => load(j)?,
                None => higman(),
            };
            let out = j_construction(&p, &j, alpha)?;
            let h1 = abelianization_invariants(&out);
            Output::done(
                vec![describe(&out), format!("  H1 = {h1}")],
                json!({ "presentation": out, "euler_characteristic": out.euler_characteristic(), "h1": h1 }),
            )
        }
        Command::Uce { presentation } => {
            let p = load(presentation)?;
            let u = uce_presentation(&p)?;
            Output::done(
                vec![describe(&u), format!("  expected relators |A|(1+|R|) = {}", p.ngens() * (1 + p.nrels()))],
                json!({ "presentation": u, "relators": u.nrels(), "expected_relators": p.ngens() * (1 + p.nrels()) }),
            )
        }
        Command::Rips { presentation } => {
            let q = load(presentation)?;
            let r = rips_construction(&q, s.seed)?;
            Output::done(
                vec![
                    describe(&r.h),
                    format!("  small cancellation ratio = {} (filler offset {})", r.ratio, r.offset),
                    format!("  relators = {} = {} + 6*{}", r.h.nrels(), q.nrels(), q.ngens()),
                ],
                serde_json::to_value(&r)?,
            )
        }
        Command::Product { left, right } => {
            let p = load(left)?.direct_product(&load(right)?);
            Output::done(vec![describe(&p)], json!({ "presentation": p }))
        }
        Command::Fibre { presentation, kernel, rips } => {
            let h = load(presentation)?;
            if *rips {
                let r = rips_construction(&h, s.seed)?;
                let g = fibre_product_generators(&r);
                let words = g.rendered();
                let mut text = vec![format!("ambient: {}", g.ambient)];
                text.extend(words.iter().map(|w| format!("  {w}")));
                Output::done(text, json!({ "ambient": g.ambient, "generators": words }))
            } else {
                let k = parse_word_list(kernel, &h.names())?;
                let f = fibre_product_finite_quotient(&h, &k, s.max_cosets)?;
                Output::done(
                    vec![
                        format!("quotient order (index in H x H) = {}", f.quotient_order),
                        format!("rewritten: {} generators, {} relators", f.rewritten.ngens(), f.rewritten.nrels()),
                        describe(&f.presentation),
                    ],
                    serde_json::to_value(&f)?,
                )
            }
        }
        Command::EpiCount { presentation } => {
            let p = load(presentation)?;
            let r = EpiCountReport::new(&p, &s.catalog()?, &s.search);
            let text = r
                .entries
                .iter()
                .map(|e| {
                    format!(
                        "{:8} order {:5}  hom {:>12}  epi {:>12}  {:?}  {} ms  {} nodes",
                        e.group, e.order, e.hom_count, e.epi_count, e.status, e.elapsed_ms, e.nodes_explored
                    )
                })
                .collect();
            let outcome = if r.is_complete() { Outcome::Done } else { Outcome::Inconclusive };
            Output { text, json: serde_json::to_value(&r)?, outcome }
        }
        Command::Quotients { presentation } => {
            let p = load(presentation)?;
            let r = simple_quotients_up_to(&p, s.bound, &s.search)?;
            let mut text = vec![format!("H1 = {}", r.h1)];
            if let Some(q) = r.cyclic_quotient {
                text.push(format!("cyclic quotient Z/{q}"));
            }
            for e in &r.groups {
                text.push(format!("{:8} {}", e.group, serde_json::to_string(&e.search)?));
            }
            text.push(format!("verdict: {:?} (bound {})", r.verdict, r.bound));
            let outcome = if r.verdict == QuotientVerdict::Inconclusive { Outcome::Inconclusive } else { Outcome::Done };
            Output { text, json: serde_json::to_value(&r)?, outcome }
        }
        Command::Coset { presentation, subgroup, rewrite } => {
            let p = load(presentation)?;
            let h = parse_word_list(subgroup, &p.names())?;
            let t = todd_coxeter(&p, &h, s.max_cosets)?;
            let mut text = vec![format!("index = {}", t.index())];
            let mut js = serde_json::to_value(&t)?;
            if *rewrite {
                let rs = reidemeister_schreier(&t);
                text.push(describe(&rs));
                js["subgroup_presentation"] = json!(rs);
            }
            Output::done(text, js)
        }
        Command::Bundle(BundleCommand::Enum { d, n, m, rho, x, loop_word, count }) => {
            let x = match x {
                Some(x) => load(x)?,
                None => higman(),
            };
            let c = parse_word(loop_word, &x.names())?;
            let rose: Vec<String> = (1..=*n).map(|i| format!("a{i}")).collect();
            let rho = parse_word_list(rho, &rose)?;
            let e = enumerate_tubular_bundles(&x, &c, *d, *n, *m, &rho, s.height)?;
            let total = e.total();
            if *count {
                Output::done(vec![total.to_string()], json!({ "count": total.to_string() }))
            } else {
                let all: Vec<TubularBundleData> = e.collect();
                let text = all.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
                Output::done(text, json!({ "count": total.to_string(), "bundles": all }))
            }
        }
        Command::Bundle(BundleCommand::Present { bundle }) => {
            let b = load_bundle(bundle)?;
            let p = tubular_bundle_presentation(&b)?;
            Output::done(vec![describe(&p)], json!({ "bundle": b, "presentation": p }))
        }
        Command::Bundle(BundleCommand::Fingerprint { bundle }) => {
            let b = load_bundle(bundle)?;
            let p = tubular_bundle_presentation(&b)?;
            let f = fingerprint(&p, s.bound, &s.search)?;
            let mut text = vec![
                format!("H1 = {}", f.h1),
                format!("h2_rank = {}  euler characteristic = {}", f.h2_rank, f.euler_characteristic),
            ];
            text.extend(f.epi_counts.iter().map(|e| format!("{:8} epi {}  {:?}", e.group, e.epi_count, e.status)));
            let outcome = if f.is_complete() { Outcome::Done } else { Outcome::Inconclusive };
            Output { text, json: json!({ "presentation": p, "fingerprint": f }), outcome }
        }
        Command::Pipeline(PipelineCommand::Grothendieck { presentation }) => {
            let q = load(presentation)?;
            let r = pipeline_grothendieck(&q, &s.pipeline())?;
            let mut text = vec![
                format!("input: {}", r.input),
                format!("H1 = {}  h2_rank = {}", r.h1, r.h2_rank),
                format!(
                    "rips: {} generators, {} relators (expected {}), ratio {}",
                    r.rips.generator_count, r.rips.relator_count, r.rips.expected_relator_count,
                    r.rips.small_cancellation_ratio
                ),
                format!("fibre generators: {}", r.fibre_generators.join(", ")),
            ];
            for row in &r.epi_table {
                text.push(format!(
                    "{:8} Q {} ({:?})  H {} ({:?})  HxH {}  P {}",
                    row.group,
                    row.q.count,
                    row.q.status,
                    row.h.count,
                    row.h.status,
                    row.h_times_h.count,
                    row.fibre_product.map_or("-".to_string(), |c| c.to_string())
                ));
            }
            text.push(format!("verdict: {}", serde_json::to_string(&r.verdict)?));
            let outcome = if r.is_inconclusive() { Outcome::Inconclusive } else { Outcome::Done };
            Output { text, json: serde_json::to_value(&r)?, outcome }
        }
        Command::Pipeline(PipelineCommand::TheoremB { presentation }) => {
            let p = load(presentation)?;
            let r = pipeline_theorem_b(&p, &s.pipeline())?;
            let mut text = vec![
                format!("J-construction: {} generators, {} relators", r.j_presentation.ngens(), r.j_presentation.nrels()),
                format!("euler characteristic {} (expected {})", r.euler_characteristic, r.expected_euler_characteristic),
                format!("UCE relators {} (expected {})", r.uce_relator_count, r.expected_uce_relator_count),
                format!("UCE quotients: {:?}", r.uce_quotients.verdict),
                format!("d = {}, bundles = {}", r.d, r.bundle_count),
            ];
            for b in &r.bundles {
                text.push(format!("bundle {} shifts {:?}: H1 = {}  {:?}", b.index, b.shifts, b.fingerprint.h1, b.comparison));
            }
            text.push(format!("candidates: {:?}", r.candidates));
            let outcome = if r.inconclusive { Outcome::Inconclusive } else { Outcome::Done };
            Output { text, json: serde_json::to_value(&r)?, outcome }
        }
    })
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CosetLimitExceeded(_) | Error::SchemeExhausted { .. }) => EXIT_INCONCLUSIVE,
        Some(Error::Inconsistent(_)) => EXIT_INTERNAL,
        Some(_) => EXIT_REJECTED,
        None if err.downcast_ref::<std::io::Error>().is_some() => EXIT_REJECTED,
        None => EXIT_INTERNAL,
    }
}

fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if path == Path::new("-") {
        println!("{text}");
    } else {
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Settings::resolve(&cli.global).and_then(|s| {
        if s.bound > CATALOG_BOUND {
            bail!(Error::CatalogBound(s.bound));
        }
        let out = run(&cli, &s)?;
        if s.json.as_deref() != Some(Path::new("-")) {
            for line in &out.text {
                println!("{line}");
            }
        }
        if let Some(path) = &s.json {
            write_json(path, &out.json)?;
        }
        Ok(out.outcome)
    });
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(EXIT_INCONCLUSIVE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
