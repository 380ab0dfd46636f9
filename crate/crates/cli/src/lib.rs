//! Command-line front end: generate complexes, run the identity suite, export
//! operator matrices and spectra, and run completeness and deficiency analyses.
//!
//! Exit codes: 0 success, 1 a suite or invariant check failed, 2 usage or I/O.

pub mod suite;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trihodge::completeness::{
    degree_quantities, offspring_verdict, xi_verdict, CompletenessVerdict, Constants, CutoffMeasurement,
    CutoffSequence, XiGrowth, XiVariant,
};
use trihodge::deficiency::{l1_candidate, l2_candidate, DeficiencyVerdict};
use trihodge::io::{complex_to_json, load_complex, matrix_market, spectrum_csv, to_json};
use trihodge::operators::{assemble, lanczos_extremes, spectrum, OperatorId, Which, DENSE_LIMIT};
use trihodge::{GeneratorDescriptor, OffspringSpec, Triangulation};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "trihodge", version, about = "Discrete Hodge operators on weighted triangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated complex as JSON.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Load a complex, check its invariants and that it re-serializes byte-identically.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Run the operator identity suite.
    Identities {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random triples per inner-product identity.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eigenvalues of a self-adjoint operator as `index,eigenvalue` CSV.
    Spectrum {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = parse_op)]
        op: OperatorId,
        /// Only the `k` extreme eigenvalues, by Lanczos; required above the dense limit.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = End::Smallest)]
        which: End,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write operator matrices in Matrix Market format, one file per operator.
    Export {
        #[command(flatten)]
        source: SourceArgs,
        /// Operators to export; all of them when omitted.
        #[arg(long, value_parser = parse_op)]
        op: Vec<OperatorId>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// χ-completeness verdict with measured cut-off constants.
    Check {
        #[command(flatten)]
        source: SourceArgs,
        /// Cut-off indices to measure; defaults to 1..depth-1.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and check an explicit candidate for Ker(L + i).
    Deficiency {
        #[arg(long, value_parser = parse_op)]
        op: OperatorId,
        /// Offspring function of the tree, for L1.
        #[arg(long)]
        off: Option<String>,
        /// Even sphere sizes `#S_0,#S_2,...`, for L2.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        depth: usize,
        /// Exit 1 unless the candidate is confirmed.
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Triangle,
    Regular,
    Tree,
    Layered,
    Bipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum End {
    Smallest,
    Largest,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Radius of the regular patch.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Offspring function: `poly:A`, `geom:Q`, `const:K` or `explicit:a,b,..`.
    #[arg(long)]
    pub off: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Layer sizes (layered) or even sphere sizes (bipartite).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Generator descriptor as a JSON file.
    #[arg(long, conflicts_with = "family")]
    pub descriptor: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Complex JSON file.
    #[arg(short, long, conflicts_with_all = ["family", "descriptor"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

fn parse_op(s: &str) -> Result<OperatorId, String> {
    s.parse().map_err(|e: trihodge::operators::matrix::UnknownOperator| e.to_string())
}

/// A failed run: either the inputs were unusable or a check did not hold.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl FamilyArgs {
    pub fn descriptor(&self) -> anyhow::Result<GeneratorDescriptor> {
        if let Some(path) = &self.descriptor {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("parsing descriptor {}", path.display()));
        }
        let family = self.family.ok_or_else(|| anyhow!("one of --input, --family or --descriptor is required"))?;
        let depth = || self.depth.ok_or_else(|| anyhow!("--depth is required for this family"));
        let sizes = || {
            if self.sizes.is_empty() {
                bail!("--sizes is required for this family")
            }
            Ok(self.sizes.clone())
        };
        Ok(match family {
            Family::Triangle => GeneratorDescriptor::Triangle,
            Family::Regular => {
                GeneratorDescriptor::Regular { radius: self.radius.ok_or_else(|| anyhow!("--radius is required"))? }
            }
            Family::Tree => GeneratorDescriptor::Tree { off: self.offspring()?, depth: depth()? },
            Family::Layered => {
                GeneratorDescriptor::Layered { sizes: sizes()?, depth: depth()?, wiring: Default::default() }
            }
            Family::Bipartite => GeneratorDescriptor::Bipartite { sizes: sizes()?, depth: depth()? },
        })
    }

    fn offspring(&self) -> anyhow::Result<OffspringSpec> {
        let off = self.off.as_deref().ok_or_else(|| anyhow!("--off is required for trees"))?;
        Ok(OffspringSpec::parse(off)?)
    }
}

impl SourceArgs {
    pub fn load(&self) -> anyhow::Result<Triangulation> {
        match &self.input {
            Some(path) => load_complex(path).with_context(|| format!("loading {}", path.display())),
            None => Ok(self.family.descriptor()?.generate()?),
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidationReport {
    vertices: usize,
    edges: usize,
    faces: usize,
    interior_vertices: usize,
    boundary_vertices: usize,
    triangle_complete: bool,
    round_trip_identical: bool,
}

/// `check` output: the verdict fields at top level, then supporting evidence.
#[derive(Serialize)]
struct CheckReport {
    criterion: &'static str,
    #[serde(flatten)]
    verdict: CompletenessVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi: Option<CompletenessVerdict>,
    cutoffs: Vec<CutoffMeasurement>,
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { family, output } => {
            let tri = family.descriptor()?.generate().map_err(anyhow::Error::from)?;
            emit(output.as_deref(), &complex_to_json(&tri))?;
        }
        Command::Validate { source } => {
            let tri = source.load()?;
            let text = complex_to_json(&tri);
            let reloaded = trihodge::io::complex_from_json(&text).map_err(anyhow::Error::from)?;
            let mut identical = complex_to_json(&reloaded) == text;
            if let Some(path) = &source.input {
                identical &= fs::read_to_string(path).map_err(anyhow::Error::from)? == text;
            }
            let boundary = (0..tri.num_vertices()).filter(|&v| tri.is_boundary_vertex(v)).count();
            let report = ValidationReport {
                vertices: tri.num_vertices(),
                edges: tri.num_edges(),
                faces: tri.num_faces(),
                interior_vertices: tri.num_vertices() - boundary,
                boundary_vertices: boundary,
                triangle_complete: tri.is_triangle_complete(),
                round_trip_identical: identical,
            };
            print!("{}", to_json(&report));
            if !identical {
                return Err(Failure::Check("round trip: re-serialized complex differs from its source".into()));
            }
        }
        Command::Identities { source, seed, trials, output } => {
            let tri = source.load()?;
            let report = suite::run_identity_suite(&tri, seed, trials).map_err(anyhow::Error::from)?;
            emit(output.as_deref(), &to_json(&report))?;
            if let Some(a) = report.first_failure() {
                return Err(Failure::Check(format!("{}: residual {:e} exceeds {:e}", a.name, a.value, a.tolerance)));
            }
        }
        Command::Spectrum { source, op, k, which, seed, output } => {
            let tri = source.load()?;
            let m = assemble(&tri, op);
            let values = match k {
                None if m.rows() > DENSE_LIMIT => {
                    return Err(anyhow!("dimension {} exceeds the dense limit {DENSE_LIMIT}; pass --k", m.rows()).into())
                }
                None => spectrum(&m).map_err(anyhow::Error::from)?,
                Some(k) => {
                    let which = if which == End::Smallest { Which::Smallest } else { Which::Largest };
                    let r = lanczos_extremes(&m, k, which, m.rows().min(1000), 1e-10, seed)
                        .map_err(anyhow::Error::from)?;
                    if !r.converged {
                        eprintln!("warning: Lanczos stopped after {} iterations before converging", r.iterations);
                    }
                    r.eigenvalues
                }
            };
            emit(output.as_deref(), &spectrum_csv(&values))?;
        }
        Command::Export { source, op, output } => {
            let tri = source.load()?;
            fs::create_dir_all(&output).with_context(|| format!("creating {}", output.display()))?;
            let ops = if op.is_empty() { OperatorId::ALL.to_vec() } else { op };
            for id in ops {
                let m = assemble(&tri, id);
                let (src, tgt) = id.spaces();
                let comment = format!("operator {id}\nsource {src:?} target {tgt:?}");
                let file = output.join(format!("{}.mtx", id.name().replace('-', "minus").replace('+', "plus")));
                fs::write(&file, matrix_market(&m, &comment)).with_context(|| format!("writing {}", file.display()))?;
            }
        }
        Command::Check { source, n, output } => {
            let report = check(&source, &n)?;
            emit(output.as_deref(), &to_json(&report))?;
        }
        Command::Deficiency { op, off, sizes, depth, strict, output } => {
            let report = match op {
                OperatorId::L1 => {
                    let off = off.as_deref().ok_or_else(|| anyhow!("--off is required for L1"))?;
                    l1_candidate(&OffspringSpec::parse(off).map_err(anyhow::Error::from)?, depth)
                }
                OperatorId::L2 if !sizes.is_empty() => l2_candidate(&sizes, depth),
                OperatorId::L2 => return Err(anyhow!("--sizes is required for L2").into()),
                other => return Err(anyhow!("no deficiency construction for {other}; use L1 or L2").into()),
            }
            .map_err(anyhow::Error::from)?;
            emit(output.as_deref(), &to_json(&report))?;
            if strict && report.verdict != DeficiencyVerdict::CandidateConfirmed {
                return Err(Failure::Check(format!(
                    "{} candidate: residual {:?} not within tolerance",
                    report.operator, report.residual
                )));
            }
        }
    }
    Ok(())
}

/// Trees given by an offspring function get the closed-form verdict; any other
/// complex gets the ξ criterion on its measured degrees.
fn check(source: &SourceArgs, ns: &[usize]) -> anyhow::Result<CheckReport> {
    let tree_off = match (&source.input, source.family.family, &source.family.descriptor) {
        (None, Some(Family::Tree), _) => Some(source.family.offspring()?),
        (None, None, Some(_)) => match source.family.descriptor()? {
            GeneratorDescriptor::Tree { off, .. } => Some(off),
            _ => None,
        },
        _ => None,
    };
    if let Some(off) = tree_off {
        let mut report = CheckReport {
            criterion: "offspring",
            verdict: offspring_verdict(&off),
            xi: Some(xi_verdict(&XiGrowth::from_offspring(&off))),
            cutoffs: vec![],
        };
        // materialize only when a depth was given
        let depth = source.family.depth.filter(|_| source.family.descriptor.is_none());
        if let Some(depth) = depth {
            let tri = source.family.descriptor()?.generate()?;
            for n in default_indices(ns, depth) {
                match CutoffSequence::offspring_series(&tri, &off, &[n]) {
                    Ok(seq) => report.cutoffs.extend(seq.measure(&tri)),
                    Err(e) => report.verdict.notes.push(format!("cut-off n={n} skipped: {e}")),
                }
            }
            report.verdict.constants = sup_constants(&report.cutoffs);
        }
        return Ok(report);
    }
    let tri = source.load()?;
    let depth = tri.layers().into_iter().max().unwrap_or(0);
    let ns = default_indices(ns, depth);
    let cutoffs = CutoffSequence::bounded_degree(&tri, tri.origin(), &ns)?.measure(&tri);
    let regular = source.input.is_none()
        && matches!(source.family.descriptor(), Ok(GeneratorDescriptor::Regular { .. }));
    let mut verdict = match degree_quantities(&tri) {
        // the infinite patch repeats the interior stencil, so the measured sup bounds ξ
        Ok(q) if regular => {
            let bound = q.xi(XiVariant::General).into_iter().fold(0.0, f64::max);
            xi_verdict(&XiGrowth::Bounded { bound })
        }
        Ok(q) => xi_verdict(&XiGrowth::Measured(q.xi(XiVariant::General))),
        Err(e) => CompletenessVerdict {
            status: trihodge::completeness::Status::Unknown,
            rule: "degree quantities unavailable".into(),
            constants: None,
            partial_sums: vec![],
            notes: vec![e.to_string()],
        },
    };
    verdict.constants = sup_constants(&cutoffs);
    Ok(CheckReport { criterion: "xi", verdict, xi: None, cutoffs })
}

fn default_indices(ns: &[usize], depth: usize) -> Vec<usize> {
    if ns.is_empty() {
        (1..depth).collect()
    } else {
        ns.to_vec()
    }
}

fn sup_constants(cutoffs: &[CutoffMeasurement]) -> Option<Constants> {
    (!cutoffs.is_empty()).then(|| Constants {
        c: cutoffs.iter().map(|m| m.graph_constant).fold(0.0, f64::max),
        m: cutoffs.iter().map(|m| m.face_constant).fold(0.0, f64::max),
    })
}
