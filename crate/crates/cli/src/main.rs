//! `ilink`: run linking constructions on seeded embeddings, write link
//! certificates and replay them.
//!
//! Exit codes: 0 ok, 2 size bound, 3 degeneracy, 4 verification mismatch,
//! 5 falsification alert, 1 anything else.

mod selfcheck;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use ilink_core::builders::TriangulatedCompleteComplex;
use ilink_core::cert::{Claim, LinkCertificate, Predicate};
use ilink_core::geom::{random_embedding_of, RationalEmbedding};
use ilink_core::ramsey::{
    self, amplify_bound, chain_bound, find_base_link, find_subdivided_base_link, four_to_three_integral,
    keyring_bound, modp_bound, modq_bound, necklace_bound, three_to_two_integral, Component, Link,
};
use ilink_core::verify::{verify, VerifyReport};
use ilink_core::{ids, Error, IntegerChain, VertexId};

#[derive(Parser, Debug)]
#[command(name = "ilink", version, about = "Linked spheres in embedded complete n-complexes, with replayable certificates")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "ILINK_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded random embedding of K^n_N.
    Embed(EmbedArgs),
    /// Linking number of two simplex boundaries.
    Lk {
        #[command(flatten)]
        run: RunArgs,
        /// Vertices of the first simplex, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        first: Vec<u32>,
        /// Vertices of the second simplex, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        second: Vec<u32>,
    },
    /// A pair of simplex boundaries in K^n_{2n+4} with odd linking number.
    BaseLink {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Spheres L_1..L_r with consecutive odd linking numbers.
    Chain {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 3)]
        r: u64,
    },
    /// As `chain`, closed up: L_r also links L_1 oddly.
    Necklace {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 3)]
        r: u64,
    },
    /// A ring R and r keys, each linking R oddly.
    Keyring {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Two spheres with linking number at least λ.
    Amplify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        lambda: u64,
    },
    /// Two spheres whose linking number is a nonzero multiple of the prime p.
    Modp {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Two spheres whose linking number is a nonzero multiple of q.
    Modq {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Splice two base links on subdivided blocks into three spheres L, Z, W.
    #[command(name = "lemma-4to3")]
    Lemma4to3 {
        #[command(flatten)]
        run: RunArgs,
        /// Side length of the subdivided blocks.
        #[arg(long, default_value_t = 4)]
        side: u32,
    },
    /// As `lemma-4to3`, then merge Z and W into one sphere J linking L.
    #[command(name = "lemma-3to2")]
    Lemma3to2 {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 4)]
        side: u32,
    },
    /// Count-formula, chain-identity and linking-oracle suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random prism configurations.
        #[arg(long, default_value_t = 200)]
        configs: usize,
        /// Random cycle pairs for the mod 2 cross-check.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        /// Random sphere pairs for the apex agreement check.
        #[arg(long, default_value_t = 300)]
        apex_pairs: usize,
    },
    /// Replay a certificate with fresh apexes.
    Verify {
        cert: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    vertices: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinates are drawn from [-box, box].
    #[arg(long = "box", default_value_t = 1000)]
    box_size: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Number of vertices N; defaults to the bound of the construction.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "box", default_value_t = 1000)]
    box_size: i64,
    /// Read the embedding from a file instead of sampling one.
    #[arg(long, conflicts_with_all = ["vertices", "seed", "box_size"])]
    embedding: Option<PathBuf>,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run even when N is below the bound, so the construction reports the size error itself.
    #[arg(long)]
    force_small: bool,
}

/// A certificate whose replay disagreed with its claims.
#[derive(Debug)]
struct Mismatch(String);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification mismatch: {}", self.0)
    }
}

impl std::error::Error for Mismatch {}

impl RunArgs {
    /// The embedding, refusing sizes below `bound` unless forced.
    fn embedding(&self, bound: u64) -> anyhow::Result<RationalEmbedding> {
        let e = match &self.embedding {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let e: RationalEmbedding =
                    serde_json::from_str(&text).map_err(|err| Error::Schema(format!("{}: {err}", path.display())))?;
                if e.n() != self.n {
                    bail!("embedding has n = {}, expected --n {}", e.n(), self.n);
                }
                e
            }
            None => {
                let count = self.vertices.unwrap_or(bound as usize);
                if (count as u64) < bound && !self.force_small {
                    return Err(size_error(UNFORCED, bound, count).into());
                }
                random_embedding_of(self.n, count, self.seed, self.box_size)?
            }
        };
        if (e.points().len() as u64) < bound && !self.force_small {
            return Err(size_error(UNFORCED, bound, e.points().len()).into());
        }
        Ok(e)
    }
}

const UNFORCED: &str = "vertices (pass --force-small to run anyway)";

fn size_error(what: &str, required: u64, actual: usize) -> Error {
    Error::Size {
        what: what.into(),
        required,
        actual: actual as u64,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .context("building the worker pool")
        .and_then(|pool| pool.install(|| run(cli.command)));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, reason) = classify(&err);
            let report = serde_json::json!({ "status": "error", "reason": reason, "exit": code, "message": format!("{err:#}") });
            eprintln!("{report}");
            ExitCode::from(code)
        }
    }
}

fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if cause.downcast_ref::<Mismatch>().is_some() {
            return (4, "verification_mismatch");
        }
        match cause.downcast_ref::<Error>() {
            Some(Error::Size { .. }) => return (2, "size_bound"),
            Some(Error::Degenerate(_)) => return (3, "degeneracy"),
            Some(Error::Falsification(_)) => return (5, "falsification_alert"),
            Some(Error::Schema(_)) => return (1, "schema"),
            Some(_) => return (1, "error"),
            None => {}
        }
    }
    (1, "error")
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Embed(args) => {
            let e = random_embedding_of(args.n, args.vertices, args.seed, args.box_size)?;
            emit(args.out.as_deref(), &serde_json::to_string_pretty(&e)?)
        }
        Command::Lk { run, first, second } => {
            let needed = first.iter().chain(&second).max().map_or(0, |&v| v as u64 + 1);
            let e = run.embedding(needed)?;
            let a = IntegerChain::simplex(&ids(&first))?.boundary()?;
            let b = IntegerChain::simplex(&ids(&second))?.boundary()?;
            let components = vec![
                Component::new("A", ilink_core::check_sphere(&a)?),
                Component::new("B", ilink_core::check_sphere(&b)?),
            ];
            let value = ramsey::class(&e, &a, &b)?;
            let link = Link {
                components,
                claims: vec![Claim::new(0, 1, value, Predicate::Exact)],
                transcript: vec![format!("simplex boundaries on {first:?} and {second:?}")],
            };
            publish(&run, "lk", BTreeMap::new(), &link, &e)
        }
        Command::BaseLink { run } => {
            let m = 2 * run.n + 4;
            let e = run.embedding(m as u64)?;
            if e.points().len() < m {
                return Err(size_error("base link vertices", m as u64, e.points().len()).into());
            }
            let verts: Vec<VertexId> = e.points().keys().copied().take(m).collect();
            let b = find_base_link(&e, &verts)?;
            let mut transcript = vec![format!("{} of {} splits have odd linking number", b.odd_count(), b.table.len())];
            transcript.extend(
                b.table
                    .iter()
                    .map(|p| format!("lk({:?}, {:?}) = {}", p.first, p.second, p.value)),
            );
            let link = Link {
                claims: vec![Claim::new(0, 1, b.value, Predicate::Odd)],
                components: vec![b.first, b.second],
                transcript,
            };
            publish(&run, "base-link", BTreeMap::new(), &link, &e)
        }
        Command::Chain { run, r } => {
            let e = run.embedding(chain_bound(run.n, r.max(2)))?;
            let link = ramsey::build_chain_link(&e, r as usize)?;
            publish(&run, "chain", params([("r", r as i64)]), &link, &e)
        }
        Command::Necklace { run, r } => {
            let e = run.embedding(necklace_bound(run.n, r))?;
            let link = ramsey::build_necklace(&e, r as usize)?;
            publish(&run, "necklace", params([("r", r as i64)]), &link, &e)
        }
        Command::Keyring { run, r } => {
            let e = run.embedding(keyring_bound(run.n, r))?;
            let kr = ramsey::build_keyring(&e, r)?;
            let link = kr.link(&e, r as usize)?;
            publish(&run, "keyring", params([("r", r as i64)]), &link, &e)
        }
        Command::Amplify { run, lambda } => {
            let e = run.embedding(amplify_bound(run.n, lambda.max(1)))?;
            let link = ramsey::amplify_linking(&e, lambda)?;
            publish(&run, "amplify", params([("lambda", lambda as i64)]), &link, &e)
        }
        Command::Modp { run, p } => {
            let e = run.embedding(modp_bound(run.n, p.max(1)))?;
            let link = ramsey::build_modp_link(&e, p)?;
            publish(&run, "modp", params([("p", p as i64)]), &link, &e)
        }
        Command::Modq { run, q } => {
            let e = run.embedding(modq_bound(run.n, q)?)?;
            let link = ramsey::build_modq_link(&e, q)?;
            publish(&run, "modq", params([("q", q as i64)]), &link, &e)
        }
        Command::Lemma4to3 { run, side } => {
            let (e, t) = lemma_setup(&run, side)?;
            let p = ramsey::class(&e, t.x2.chain(), t.y2.chain())?.abs();
            let out = four_to_three_integral(&e, &t.x1, &t.y1, &t.x2, &t.y2, side)?;
            let mut transcript = t.transcript;
            transcript.push(format!("case {}", out.case));
            transcript.extend(out.transcript);
            let link = Link {
                claims: vec![
                    Claim::new(0, 1, out.p1, Predicate::AtLeast { bound: 1 }),
                    Claim::new(0, 2, out.p2, Predicate::AtLeast { bound: p.max(1) }),
                ],
                components: vec![out.l.renamed("L"), out.z.renamed("Z"), out.w.renamed("W")],
                transcript,
            };
            publish(&run, "lemma-4to3", params([("side", side as i64)]), &link, &e)
        }
        Command::Lemma3to2 { run, side } => {
            let (e, t) = lemma_setup(&run, side)?;
            let out = four_to_three_integral(&e, &t.x1, &t.y1, &t.x2, &t.y2, side)?;
            let mut transcript = t.transcript;
            transcript.push(format!("case {}; p1 = {}, p2 = {}", out.case, out.p1, out.p2));
            transcript.extend(out.transcript);
            let merged = three_to_two_integral(&e, &out.l, &out.z, &out.w, side)?;
            transcript.extend(merged.transcript);
            let link = Link {
                claims: vec![Claim::new(0, 1, merged.value, Predicate::AtLeast { bound: out.p1 + out.p2 })],
                components: vec![merged.j.renamed("J"), out.l.renamed("L")],
                transcript,
            };
            publish(&run, "lemma-3to2", params([("side", side as i64)]), &link, &e)
        }
        Command::Selfcheck {
            seed,
            configs,
            pairs,
            apex_pairs,
        } => {
            let suites = selfcheck::run_all(seed, configs, pairs, apex_pairs);
            println!("{:<16} {:>7} {:>8}  result", "suite", "cases", "failures");
            for s in &suites {
                println!(
                    "{:<16} {:>7} {:>8}  {}",
                    s.name,
                    s.cases,
                    s.failures.len(),
                    if s.failures.is_empty() { "PASS" } else { "FAIL" }
                );
            }
            let failed: Vec<String> = suites
                .iter()
                .flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.name)))
                .collect();
            for f in &failed {
                eprintln!("{f}");
            }
            if let Some(first) = failed.first() {
                return Err(Error::Falsification(format!("{} self-check failures, first: {first}", failed.len())).into());
            }
            Ok(())
        }
        Command::Verify { cert, json } => {
            let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let parsed = LinkCertificate::from_json(&text)?;
            let report = verify(&parsed);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&parsed, &report);
            }
            match report.first_failure() {
                Some(failure) => Err(Mismatch(failure).into()),
                None => Ok(()),
            }
        }
    }
}

fn params<const K: usize>(pairs: [(&str, i64); K]) -> BTreeMap<String, i64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Two base links on subdivided blocks of the given side.
struct LemmaInput {
    x1: Component,
    y1: Component,
    x2: Component,
    y2: Component,
    transcript: Vec<String>,
}

fn lemma_setup(run: &RunArgs, side: u32) -> anyhow::Result<(RationalEmbedding, LemmaInput)> {
    let n = run.n;
    let first = TriangulatedCompleteComplex::new(2 * n + 4, n, side, 0)?;
    let v = first.vertex_count();
    let second = TriangulatedCompleteComplex::new(2 * n + 4, n, side, v as u32)?;
    let e = run.embedding(2 * v as u64)?;
    if e.points().len() < 2 * v {
        return Err(size_error("lemma block vertices", 2 * v as u64, e.points().len()).into());
    }
    let a = find_subdivided_base_link(&e, &first)?;
    let b = find_subdivided_base_link(&e, &second)?;
    let transcript = vec![format!(
        "two blocks of side {side} with {v} vertices each; lk(X1, Y1) = {}, lk(X2, Y2) = {}",
        a.value, b.value
    )];
    Ok((
        e,
        LemmaInput {
            x1: a.first.renamed("X1"),
            y1: a.second.renamed("Y1"),
            x2: b.first.renamed("X2"),
            y2: b.second.renamed("Y2"),
            transcript,
        },
    ))
}

/// Certifies, replays and writes the certificate.
fn publish(
    run: &RunArgs,
    theorem: &str,
    params: BTreeMap<String, i64>,
    link: &Link,
    e: &RationalEmbedding,
) -> anyhow::Result<()> {
    let cert = link.certify(theorem, params, e)?;
    let report = verify(&cert);
    if let Some(failure) = report.first_failure() {
        return Err(Mismatch(failure).into());
    }
    emit(run.out.as_deref(), &cert.to_json())?;
    let claims: Vec<String> = cert
        .claims
        .iter()
        .map(|c| format!("lk({}, {}) = {}", cert.components[c.a].name, cert.components[c.b].name, c.value))
        .collect();
    eprintln!(
        "{theorem}: {} components on {} vertices; {}; replay ok",
        cert.components.len(),
        e.points().len(),
        claims.join(", ")
    );
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_report(cert: &LinkCertificate, report: &VerifyReport) {
    println!("certificate {} (n = {}, {} vertices)", cert.theorem, cert.n, cert.embedding.points().len());
    for c in &report.components {
        println!("  component {:<6} {}  {}", c.name, if c.ok { "ok  " } else { "FAIL" }, c.detail);
    }
    for c in &report.claims {
        println!(
            "  claim {} lk({}, {}) = {:<4} recomputed {:?}  {}",
            c.index,
            c.pair.0,
            c.pair.1,
            c.claimed,
            c.recomputed,
            if c.ok { "match" } else { "MISMATCH" }
        );
    }
    println!("{}", if report.ok() { "verified" } else { "not verified" });
}
