//! Command-line driver. Every check prints one line
//! `CHECK <name> <PASS|FAIL|INFO> [tokens]`; the exit code is 0 when no
//! check fails, 1 when one does, and 2 on bad input or usage.

mod format;

pub use format::{parse_inc, parse_kf, serialize_inc, serialize_kf, FormatError};

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::algebra::FieldSpec;
use crate::cosetgeom::{expand, expand_unverified, induced_collineation, verify_translation_action, IncidenceStructure, PointLabel};
use crate::dirlim::{
    automorphism_suite, commuting_square_suite, group_law_suite, mat_mul, strictness_test, verify_commuting_square,
    DirectedSystem, DirlimError, Matrix, Strictness,
};
use crate::egg::{build_egg, verify_unit_egg_permutation};
use crate::gq::{
    ideal_closure, is_regular_point, regular_pair, verify_axis_of_symmetry, verify_gq, verify_ideal_subgq, Axiom1,
    Axiom2, Axiom3, GqView, IdealVerdict, RegularPointVerdict, Substructure,
};
use crate::kantor::{build_secant2, build_t2_oval, verify_kf, AxiomVerdict, KantorFamily, OvalSpec};
use crate::kernel::{classify, compute_kernel, injectivity_check, unit_order, ConstraintMode, KernelRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    fn token(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
        }
    }
}

/// Accumulated check lines.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Report {
    lines: Vec<String>,
    failed: bool,
}

impl Report {
    pub fn check(&mut self, name: &str, verdict: Verdict, tokens: impl AsRef<str>) {
        let tokens = tokens.as_ref();
        self.failed |= verdict == Verdict::Fail;
        let mut line = format!("CHECK {name} {}", verdict.token());
        if !tokens.is_empty() {
            line.push(' ');
            line.push_str(tokens);
        }
        self.lines.push(line);
    }

    fn pass_fail(&mut self, name: &str, ok: bool, tokens: impl AsRef<str>) {
        self.check(name, if ok { Verdict::Pass } else { Verdict::Fail }, tokens);
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

#[derive(Parser, Debug)]
#[command(name = "tgq", about = "Translation generalized quadrangles from Kantor families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family and write it as .kf
    Build(BuildArgs),
    /// Kantor family checks
    Kf {
        #[command(subcommand)]
        cmd: KfCmd,
    },
    /// Quadrangle checks on a .kf or .inc file
    Gq {
        #[command(subcommand)]
        cmd: GqCmd,
    },
    /// Kernel ring of a family
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Projective representation over the kernel field
    Egg { file: PathBuf },
    /// Image fixpoint of every kernel unit
    Chain {
        #[command(subcommand)]
        cmd: ChainCmd,
    },
    /// Direct limit along an injective endomorphism
    Colimit(ColimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    T2Oval,
    Secant2,
}

#[derive(clap::Args, Debug)]
struct BuildArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    #[arg(long)]
    q: u64,
    /// Oval for t2-oval; only `conic` is built in
    #[arg(long, default_value = "conic")]
    oval: String,
    /// Index of the removed hyperoval point for secant2 (default: the nucleus)
    #[arg(long)]
    c: Option<usize>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum KfCmd {
    Verify {
        file: PathBuf,
    },
    Expand {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GqCmd {
    Verify {
        file: PathBuf,
    },
    Analyze {
        file: PathBuf,
        #[arg(long)]
        regularity: bool,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        core: bool,
        /// Point label or index (default INF)
        #[arg(long)]
        x: Option<String>,
        /// Point label or index (default the affine origin)
        #[arg(long)]
        z: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    F,
    Fstar,
}

impl From<Mode> for ConstraintMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::F => ConstraintMode::FOnly,
            Mode::Fstar => ConstraintMode::FAndFStar,
        }
    }
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fstar")]
        mode: Mode,
    },
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fstar")]
        mode: Mode,
    },
}

#[derive(Subcommand, Debug)]
enum ChainCmd {
    Verify { file: PathBuf },
}

#[derive(clap::Args, Debug)]
struct ColimitArgs {
    /// Z, Z^r or F<p>^n
    #[arg(long)]
    base: String,
    /// Rows separated by `;`, entries by `,`; a single integer is a scalar
    #[arg(long, allow_hyphen_values = true)]
    zeta: String,
    #[arg(long, default_value_t = 5)]
    depth: u32,
    #[arg(long)]
    strictness: bool,
    /// Endomorphism to extend, in the format of --zeta
    #[arg(long, allow_hyphen_values = true)]
    commute: Option<String>,
}

/// Runs one command line (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(report) => {
            if out.write_all(report.render().as_bytes()).is_err() {
                return 2;
            }
            i32::from(report.failed())
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_family(path: &Path) -> anyhow::Result<KantorFamily> {
    parse_kf(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

enum Input {
    Family(KantorFamily),
    Structure(IncidenceStructure),
}

/// A .kf or .inc file, told apart by its header.
fn load_input(path: &Path) -> anyhow::Result<Input> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let ctx = || format!("parsing {}", path.display());
    if first.starts_with("KF") {
        Ok(Input::Family(parse_kf(&text).with_context(ctx)?))
    } else if first.starts_with("INC") {
        Ok(Input::Structure(parse_inc(&text).with_context(ctx)?))
    } else {
        bail!("{}: neither a KF nor an INC file", path.display())
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> anyhow::Result<Report> {
    match cmd {
        Command::Build(a) => build(a, out),
        Command::Kf { cmd: KfCmd::Verify { file } } => Ok(kf_verify(&load_family(&file)?)),
        Command::Kf { cmd: KfCmd::Expand { file, output } } => kf_expand(&load_family(&file)?, output.as_deref(), out),
        Command::Gq { cmd: GqCmd::Verify { file } } => Ok(match load_input(&file)? {
            Input::Family(fam) => gq_verify_family(&fam),
            Input::Structure(geom) => gq_verify(&geom),
        }),
        Command::Gq {
            cmd: GqCmd::Analyze { file, regularity, symmetry, core, x, z },
        } => {
            let all = !(regularity || symmetry || core);
            let opts = AnalyzeOptions {
                regularity: regularity || all,
                symmetry: symmetry || all,
                core: core || all,
                x,
                z,
            };
            match load_input(&file)? {
                Input::Family(fam) => gq_analyze(Some(&fam), &expand_unverified(&fam), &opts),
                Input::Structure(geom) => {
                    if symmetry {
                        bail!("--symmetry needs a .kf input");
                    }
                    gq_analyze(None, &geom, &AnalyzeOptions { symmetry: false, ..opts })
                }
            }
        }
        Command::Kernel { cmd: KernelCmd::Compute { file, mode } } => Ok(kernel_compute(&load_family(&file)?, mode.into())),
        Command::Kernel { cmd: KernelCmd::Classify { file, mode } } => Ok(kernel_classify(&load_family(&file)?, mode.into())),
        Command::Egg { file } => Ok(egg_report(&load_family(&file)?)),
        Command::Chain { cmd: ChainCmd::Verify { file } } => Ok(chain_verify(&load_family(&file)?)),
        Command::Colimit(a) => colimit(&a),
    }
}

/// The family a `build` invocation produces.
pub fn build_family(construction: &str, q: u64, oval: &str, c: Option<usize>) -> anyhow::Result<KantorFamily> {
    let field = FieldSpec::for_order(q)?;
    match construction {
        "t2-oval" => {
            if oval != "conic" {
                bail!("unknown oval `{oval}`; only `conic` is built in");
            }
            Ok(build_t2_oval(&OvalSpec::conic(field))?)
        }
        "secant2" => {
            let c = c.unwrap_or(q as usize + 1);
            Ok(build_secant2(&field, c)?)
        }
        other => bail!("unknown construction `{other}`"),
    }
}

fn build(a: BuildArgs, out: &mut dyn Write) -> anyhow::Result<Report> {
    let name = match a.construction {
        Construction::T2Oval => "t2-oval",
        Construction::Secant2 => "secant2",
    };
    let fam = build_family(name, a.q, &a.oval, a.c)?;
    let text = serialize_kf(&fam);
    let mut r = Report::default();
    match a.output {
        Some(path) => {
            write_file(&path, &text)?;
            r.check(
                "build",
                Verdict::Info,
                format!("construction={name} q={} p={} n={} members={}", a.q, fam.p(), fam.n(), fam.members().len()),
            );
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(r)
}

pub fn kf_verify(fam: &KantorFamily) -> Report {
    let mut r = Report::default();
    kf_checks(fam, &mut r);
    r
}

fn kf_checks(fam: &KantorFamily, r: &mut Report) -> bool {
    let rep = verify_kf(fam);
    for (k, v) in rep.axioms().iter().enumerate() {
        let name = format!("kf.KF{}", k + 1);
        match v {
            AxiomVerdict::Pass => r.check(&name, Verdict::Pass, ""),
            AxiomVerdict::Fail(w) => r.check(&name, Verdict::Fail, w.tokens()),
        }
    }
    r.check(
        "kf.parameters",
        Verdict::Info,
        format!("s={} t={} order={} consistent={}", rep.s, rep.t, fam.group_order(), rep.consistent),
    );
    rep.passed()
}

fn kf_expand(fam: &KantorFamily, output: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<Report> {
    let mut r = Report::default();
    let mut scratch = Report::default();
    if !kf_checks(fam, &mut scratch) {
        for l in scratch.lines.iter().filter(|l| l.contains(" FAIL")) {
            r.lines.push(l.clone());
        }
        r.failed = true;
        return Ok(r);
    }
    let geom = expand(fam)?;
    let text = serialize_inc(&geom);
    match output {
        Some(path) => {
            write_file(path, &text)?;
            r.check("kf.expand", Verdict::Info, format!("points={} lines={}", geom.num_points(), geom.num_lines()));
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(r)
}

pub fn gq_verify(geom: &IncidenceStructure) -> Report {
    let mut r = Report::default();
    let rep = verify_gq(geom);
    match rep.axiom_i {
        Axiom1::Pass => r.check("gq.axiom1", Verdict::Pass, ""),
        w => r.check("gq.axiom1", Verdict::Fail, w.tokens()),
    }
    match rep.axiom_ii {
        Axiom2::Pass => r.check("gq.axiom2", Verdict::Pass, ""),
        Axiom2::Projections { point, line, count } => {
            r.check("gq.axiom2", Verdict::Fail, format!("point={point} line={line} projections={count}"))
        }
    }
    match rep.axiom_iii {
        Axiom3::Thick => r.check("gq.axiom3", Verdict::Pass, "thick"),
        Axiom3::Thin => r.check("gq.axiom3", Verdict::Pass, "thin"),
        Axiom3::Degenerate { point, line } => {
            let opt = |o: Option<usize>| o.map_or("-".to_string(), |x| x.to_string());
            r.check("gq.axiom3", Verdict::Fail, format!("degenerate point={} line={}", opt(point), opt(line)))
        }
    }
    let (s, t) = rep
        .order
        .map_or(("-".to_string(), "-".to_string()), |(s, t)| (s.to_string(), t.to_string()));
    r.check(
        "gq.order",
        Verdict::Info,
        format!("s={s} t={t} points={} lines={}", geom.num_points(), geom.num_lines()),
    );
    r
}

pub fn gq_verify_family(fam: &KantorFamily) -> Report {
    let geom = expand_unverified(fam);
    let mut r = gq_verify(&geom);
    let t = verify_translation_action(fam, &geom);
    match &t.result {
        Ok(()) => r.check("gq.translation", Verdict::Pass, format!("orbit={} group={}", t.orbit, t.group_order)),
        Err(e) => r.check("gq.translation", Verdict::Fail, e.tokens()),
    }
    r
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub regularity: bool,
    pub symmetry: bool,
    pub core: bool,
    pub x: Option<String>,
    pub z: Option<String>,
}

fn resolve_point(geom: &IncidenceStructure, token: &str) -> anyhow::Result<usize> {
    if let Some(i) = geom.point_index(&PointLabel::parse(token)) {
        return Ok(i);
    }
    match token.parse::<usize>() {
        Ok(i) if i < geom.num_points() => Ok(i),
        _ => bail!("no point `{token}`"),
    }
}

fn default_z(geom: &IncidenceStructure) -> Option<usize> {
    geom.point_labels().iter().position(|l| match l {
        PointLabel::Affine(g) => g.is_zero(),
        _ => false,
    })
}

pub fn gq_analyze(fam: Option<&KantorFamily>, geom: &IncidenceStructure, opts: &AnalyzeOptions) -> anyhow::Result<Report> {
    let x = match &opts.x {
        Some(t) => resolve_point(geom, t)?,
        None => geom.point_index(&PointLabel::Infinity).ok_or_else(|| anyhow!("no INF point; pass --x"))?,
    };
    let z = match &opts.z {
        Some(t) => resolve_point(geom, t)?,
        None => default_z(geom).ok_or_else(|| anyhow!("no affine origin; pass --z"))?,
    };
    let label = |p: usize| geom.point_label(p).token();
    let view = GqView::new(geom);
    if view.collinear(x, z) {
        bail!("{} and {} are collinear", label(x), label(z));
    }
    let mut r = Report::default();
    if opts.regularity {
        let pair = regular_pair(geom, x, z)?;
        r.check(
            "gq.regular-pair",
            Verdict::Info,
            format!(
                "x={} z={} regular={} perp={} perp-perp={}",
                label(x),
                label(z),
                pair.regular,
                pair.perp.len(),
                pair.perp_perp.len()
            ),
        );
        match is_regular_point(geom, x)? {
            RegularPointVerdict::Regular => r.check("gq.regular-point", Verdict::Info, format!("x={} regular=true", label(x))),
            RegularPointVerdict::NotRegular { y, perp_perp } => r.check(
                "gq.regular-point",
                Verdict::Info,
                format!("x={} regular=false witness={} perp-perp={perp_perp}", label(x), label(y)),
            ),
        }
        if let Some((s, t)) = verify_gq(geom).order {
            r.check("gq.order-parity", Verdict::Info, format!("s={s} t={t} equal={} even={}", s == t, s % 2 == 0));
        }
    }
    if opts.symmetry {
        let fam = fam.ok_or_else(|| anyhow!("--symmetry needs a .kf input"))?;
        for i in 0..fam.members().len() {
            let rep = verify_axis_of_symmetry(fam, geom, i)?;
            let name = format!("gq.axis.T{i}");
            match &rep.result {
                Ok(()) => r.check(&name, Verdict::Pass, format!("lines={}", rep.lines_checked)),
                Err(e) => r.check(&name, Verdict::Fail, e.tokens()),
            }
        }
    }
    if opts.core {
        let c = ideal_closure(geom, &[x, z])?;
        r.check(
            "gq.core",
            Verdict::Info,
            format!(
                "x={} z={} class={} points={} lines={}",
                label(x),
                label(z),
                c.class.token(),
                c.sub.points().len(),
                c.sub.lines().len()
            ),
        );
        let (ok, tokens) = ideal_verdict(&c.sub);
        r.pass_fail("gq.core.ideal", ok, tokens);
    }
    Ok(r)
}

/// Verdict and witness for an ideal-subGQ check.
fn ideal_verdict(sub: &Substructure) -> (bool, String) {
    let v = verify_ideal_subgq(sub);
    let tokens = match &v {
        IdealVerdict::Ideal(rep) => {
            let (s, t) = rep.order.unwrap_or_default();
            format!("s={s} t={t}")
        }
        IdealVerdict::NotGq(rep) => format!("not-a-gq {}", rep.axiom_i.tokens()).trim().to_string(),
        IdealVerdict::MissingLine { point, line } => format!("missing point={point} line={line}"),
    };
    (v.passed(), tokens)
}

fn ring_line(r: &mut Report, ring: &KernelRing) {
    r.check(
        "kernel.ring",
        Verdict::Info,
        format!(
            "mode={} dim={} size={} constraints={}",
            ring.mode().token(),
            ring.dim(),
            ring.size(),
            ring.constraints().len()
        ),
    );
}

pub fn kernel_compute(fam: &KantorFamily, mode: ConstraintMode) -> Report {
    let ring = compute_kernel(fam, mode);
    let mut r = Report::default();
    ring_line(&mut r, &ring);
    for (k, b) in ring.basis().iter().enumerate() {
        r.check("kernel.basis", Verdict::Info, format!("index={k} matrix={}", b.token()));
    }
    match ring.verify_closure() {
        None => r.check("kernel.closure", Verdict::Pass, ""),
        Some((i, j)) => r.check("kernel.closure", Verdict::Fail, format!("product={i},{j}")),
    }
    r
}

pub fn kernel_classify(fam: &KantorFamily, mode: ConstraintMode) -> Report {
    let ring = compute_kernel(fam, mode);
    let mut r = Report::default();
    ring_line(&mut r, &ring);
    let c = classify(&ring);
    r.check(
        "kernel.classify",
        Verdict::Info,
        format!(
            "size={} commutative={} domain={} field={} characteristic={} prime-field={} units={}",
            c.size, c.is_commutative, c.is_integral_domain, c.is_field, c.characteristic, c.prime_field_size, c.unit_count
        ),
    );
    if let Some((a, b)) = &c.zero_divisor {
        r.check("kernel.zero-divisor", Verdict::Info, format!("a={} b={}", a.token(), b.token()));
    }
    if let Some((i, j)) = c.non_commuting {
        r.check("kernel.non-commuting", Verdict::Info, format!("basis={i},{j}"));
    }
    let inj = injectivity_check(&ring);
    match inj.failures.first() {
        None => r.check("kernel.injective", Verdict::Pass, format!("checked={}", inj.checked)),
        Some((m, ker)) => r.check(
            "kernel.injective",
            Verdict::Fail,
            format!("matrix={} kernel={} failures={}", m.token(), ker[0].token(), inj.failures.len()),
        ),
    }
    let p = u64::from(ring.p());
    let bad = (1..p as i64).find(|&l| !ring.multiplication_endo(l).pow(p - 1).matrix().is_identity());
    match bad {
        None => r.check("kernel.prime-scalars", Verdict::Pass, format!("p={p}")),
        Some(l) => r.check("kernel.prime-scalars", Verdict::Fail, format!("lambda={l}")),
    }
    r
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn egg_report(fam: &KantorFamily) -> Report {
    let mut r = Report::default();
    let ring = compute_kernel(fam, ConstraintMode::FAndFStar);
    let egg = match build_egg(fam, &ring) {
        Ok(e) => e,
        Err(e) => {
            r.check("egg.build", Verdict::Fail, e.to_string().replace(' ', "_"));
            return r;
        }
    };
    r.check("egg.field", Verdict::Info, format!("size={} e={} m={}", egg.field_size(), egg.e(), egg.m()));
    let basis: Vec<String> = egg.basis().iter().map(|b| b.token()).collect();
    r.check("egg.basis", Verdict::Info, basis.join(" "));
    for (i, m) in egg.members().iter().enumerate() {
        r.check(
            "egg.member",
            Verdict::Info,
            format!("index={i} a={} dim-a={} star={} dim-star={}", m.a.token(), m.a.dim, m.star.token(), m.star.dim),
        );
    }
    r.check("egg.invariants", Verdict::Pass, format!("n={}", fam.n()));
    for u in ring.elements().filter(|u| u.is_unit()) {
        match verify_unit_egg_permutation(&egg, &u) {
            Ok(p) => r.check(
                "egg.unit",
                Verdict::Pass,
                format!(
                    "unit={} members={} stars={} moves-points={}",
                    u.matrix().token(),
                    join_usize(&p.members),
                    join_usize(&p.stars),
                    p.moves_points
                ),
            ),
            Err(e) => r.check("egg.unit", Verdict::Fail, format!("unit={} {}", u.matrix().token(), e.to_string().replace(' ', "_"))),
        }
    }
    r
}

/// For every kernel unit: the image family is the family, and the image
/// of the quadrangle under the induced collineation is an ideal subGQ.
pub fn chain_verify(fam: &KantorFamily) -> Report {
    let mut r = Report::default();
    let ring = compute_kernel(fam, ConstraintMode::FAndFStar);
    let geom = expand_unverified(fam);
    for u in ring.elements().filter(|u| u.is_unit()) {
        let tok = u.matrix().token();
        let order = unit_order(&u).map_or("-".to_string(), |o| o.to_string());
        match u.image_family() {
            Ok(img) if img == *fam => r.check("chain.fixpoint", Verdict::Pass, format!("unit={tok} order={order}")),
            Ok(img) => {
                let i = fam.members().iter().zip(img.members()).position(|(a, b)| a != b).unwrap_or(0);
                r.check("chain.fixpoint", Verdict::Fail, format!("unit={tok} member={i}"))
            }
            Err(e) => r.check("chain.fixpoint", Verdict::Fail, format!("unit={tok} {}", e.to_string().replace(' ', "_"))),
        }
        match induced_collineation(fam, &geom, u.matrix()) {
            Ok(c) => match Substructure::new(&geom, c.points.iter().copied(), c.lines.iter().copied()) {
                Ok(sub) => {
                    let (ok, tokens) = ideal_verdict(&sub);
                    r.pass_fail(
                        "chain.ideal",
                        ok,
                        format!("unit={tok} points={} lines={} {tokens}", sub.points().len(), sub.lines().len()),
                    );
                }
                Err(e) => r.check("chain.ideal", Verdict::Fail, format!("unit={tok} {}", e.to_string().replace(' ', "_"))),
            },
            Err(e) => r.check("chain.ideal", Verdict::Fail, format!("unit={tok} {}", e.to_string().replace(' ', "_"))),
        }
    }
    r
}

/// `a,b;c,d`; a single entry is `m·I` of the given rank.
pub fn parse_matrix(s: &str, rank: usize) -> anyhow::Result<Matrix> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| anyhow!("bad matrix entry `{x}`")))
                .collect()
        })
        .collect::<anyhow::Result<_>>()?;
    if rows.len() == 1 && rows[0].len() == 1 && rank > 1 {
        let m = rows[0][0].clone();
        return Ok((0..rank)
            .map(|i| (0..rank).map(|j| if i == j { m.clone() } else { BigInt::from(0) }).collect())
            .collect());
    }
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        bail!("matrix `{s}` is not {rank}x{rank}");
    }
    Ok(rows)
}

fn matrix_token(m: &Matrix) -> String {
    m.iter()
        .map(|r| r.iter().map(BigInt::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// `Z`, `Z^r`, `F<p>` or `F<p>^n`, as `(p, rank)`.
fn parse_base(s: &str) -> anyhow::Result<(Option<u64>, usize)> {
    let (head, rank) = match s.split_once('^') {
        Some((h, r)) => (h, r.parse::<usize>().map_err(|_| anyhow!("bad rank in `{s}`"))?),
        None => (s, 1),
    };
    if rank == 0 {
        bail!("rank must be positive");
    }
    if head == "Z" {
        return Ok((None, rank));
    }
    let p = head
        .strip_prefix('F')
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| anyhow!("unknown base `{s}`"))?;
    Ok((Some(p), rank))
}

const SAMPLES: usize = 1000;
const SEED: u64 = 0;

fn suite_line(r: &mut Report, name: &str, rep: &crate::dirlim::SuiteReport) {
    match &rep.failure {
        None => r.check(name, Verdict::Pass, format!("samples={} seed={SEED}", rep.samples)),
        Some((law, es)) => {
            let es: Vec<String> = es.iter().map(|e| e.token()).collect();
            r.check(name, Verdict::Fail, format!("law={law} elements={}", es.join(",")))
        }
    }
}

fn colimit(a: &ColimitArgs) -> anyhow::Result<Report> {
    let (p, rank) = parse_base(&a.base)?;
    let zeta = parse_matrix(&a.zeta, rank)?;
    let sys = match p {
        Some(p) => DirectedSystem::elementary(p, zeta)?,
        None => DirectedSystem::lattice(zeta)?,
    };
    colimit_report(&sys, a.depth, a.strictness, a.commute.as_deref())
}

pub fn colimit_report(sys: &DirectedSystem, depth: u32, strictness: bool, commute: Option<&str>) -> anyhow::Result<Report> {
    let mut r = Report::default();
    if !strictness && commute.is_none() {
        r.check(
            "colimit.system",
            Verdict::Info,
            format!(
                "base={} zeta={} det={} trivializing={}",
                sys.base().token(),
                matrix_token(sys.zeta()),
                sys.det(),
                sys.is_trivializing()
            ),
        );
        suite_line(&mut r, "colimit.group-law", &group_law_suite(sys, SAMPLES, SEED)?);
        suite_line(&mut r, "colimit.automorphism", &automorphism_suite(sys, SAMPLES, SEED)?);
    }
    if strictness {
        match strictness_test(sys, depth) {
            Strictness::Strict { witnesses } => {
                for (j, w) in witnesses.iter().enumerate() {
                    r.check("colimit.strict", Verdict::Info, format!("level={} witness={}", j + 1, w.token()));
                }
            }
            Strictness::NonStrict { reason, collapse_verified } => {
                for j in 1..=depth {
                    r.check(
                        "colimit.strict",
                        if collapse_verified { Verdict::Info } else { Verdict::Fail },
                        format!("level={j} stable reason={} collapse={collapse_verified}", reason.token()),
                    );
                }
            }
        }
    }
    if let Some(m) = commute {
        let phi = parse_matrix(m, sys.rank())?;
        match verify_commuting_square(sys, &phi, depth) {
            Err(DirlimError::NotCommuting) => {
                r.check(
                    "colimit.commute",
                    Verdict::Fail,
                    format!(
                        "phi*zeta={} zeta*phi={}",
                        matrix_token(&mat_mul(&phi, sys.zeta())),
                        matrix_token(&mat_mul(sys.zeta(), &phi))
                    ),
                );
            }
            Err(e) => return Err(e.into()),
            Ok(rep) => {
                match &rep.failure {
                    None => r.check("colimit.commute", Verdict::Pass, format!("depth={depth} checks={}", rep.checks)),
                    Some((j, g)) => {
                        let g: Vec<String> = g.iter().map(BigInt::to_string).collect();
                        r.check("colimit.commute", Verdict::Fail, format!("level={j} g=({})", g.join(",")))
                    }
                }
                suite_line(&mut r, "colimit.commute-suite", &commuting_square_suite(sys, &phi, SAMPLES, SEED)?);
            }
        }
    }
    Ok(r)
}

/// Report text for a family, as the report commands print it; used to
/// check determinism.
pub fn family_report_text(fam: &KantorFamily) -> String {
    let mut s = String::new();
    for rep in [kf_verify(fam), gq_verify_family(fam), kernel_classify(fam, ConstraintMode::FAndFStar), chain_verify(fam)] {
        let _ = write!(s, "{}", rep.render());
    }
    s
}
