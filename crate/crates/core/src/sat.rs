//! Grid-graph colorings of the torus and their SAT encoding.
//!
//! `G(s, k)` has the `s × s` grid points of the torus as vertices and joins two
//! points whose squared toroidal grid distance is at least `k`, i.e. whose torus
//! distance is at least `τ = √k / s`. A proper `m`-coloring yields a pixel
//! partition; a certified UNSAT verdict yields the lower bound `d_m ≥ τ`.
//!
//! Variable `w(u, c)` ("cell `u` has color `c`") is numbered `u·m + c + 1`
//! with `u = x·s + y`. This numbering is part of the file format.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::region::{PixelSet, Partition, Region};

#[derive(Debug, Error)]
pub enum SatError {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("model leaves cell ({x}, {y}) without a color")]
    IncompleteModel { x: u32, y: u32 },
    #[error("cells {a:?} and {b:?} share color {color} but are at squared distance ≥ k")]
    ImproperColoring { a: (u32, u32), b: (u32, u32), color: u32 },
    #[error("record is not an UNSAT certificate")]
    State,
    #[error("brute force limited to s ≤ 4 and m ≤ 6, got s={s}, m={m}")]
    ResourceLimit { s: u32, m: u32 },
    #[error("solver: {0}")]
    Solver(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// `(s, k, m)`: grid size, squared grid-distance threshold, color count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridGraphSpec {
    pub s: u32,
    pub k: u64,
    pub m: u32,
}

impl GridGraphSpec {
    pub fn new(s: u32, k: u64, m: u32) -> Result<Self, SatError> {
        if s < 2 {
            return Err(SatError::InvalidSpec(format!("grid size {s} < 2")));
        }
        if k < 1 {
            return Err(SatError::InvalidSpec("threshold k must be ≥ 1".into()));
        }
        if m < 1 {
            return Err(SatError::InvalidSpec("need at least one color".into()));
        }
        Ok(Self { s, k, m })
    }

    pub fn tau(&self) -> f64 {
        (self.k as f64).sqrt() / f64::from(self.s)
    }

    pub fn cells(&self) -> usize {
        (self.s as usize) * (self.s as usize)
    }

    pub fn cell(&self, u: usize) -> (u32, u32) {
        ((u / self.s as usize) as u32, (u % self.s as usize) as u32)
    }

    pub fn index(&self, x: u32, y: u32) -> usize {
        x as usize * self.s as usize + y as usize
    }

    /// Squared toroidal grid distance between two cells.
    pub fn sq_dist(&self, a: (u32, u32), b: (u32, u32)) -> u64 {
        let s = u64::from(self.s);
        let axis = |p: u32, q: u32| {
            let d = u64::from(p.abs_diff(q));
            let d = d.min(s - d);
            d * d
        };
        axis(a.0, b.0) + axis(a.1, b.1)
    }

    pub fn adjacent(&self, a: (u32, u32), b: (u32, u32)) -> bool {
        a != b && self.sq_dist(a, b) >= self.k
    }

    pub fn var(&self, u: usize, color: u32) -> i64 {
        (u as i64) * i64::from(self.m) + i64::from(color) + 1
    }

    pub fn num_vars(&self) -> usize {
        self.cells() * self.m as usize
    }
}

/// All edges `(u, v)`, `u < v`, in lexicographic order.
pub fn build_grid_graph(spec: &GridGraphSpec) -> Vec<(usize, usize)> {
    let n = spec.cells();
    let mut edges = Vec::new();
    for u in 0..n {
        let cu = spec.cell(u);
        for v in (u + 1)..n {
            if spec.adjacent(cu, spec.cell(v)) {
                edges.push((u, v));
            }
        }
    }
    edges
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CnfOptions {
    /// Pin the colors of a greedy clique through cell 0 to `0, 1, …`,
    /// removing the color permutation symmetry.
    pub symmetry_breaking: bool,
}

/// Plain DIMACS encoding: `|E|·m` binary clauses and `s²` at-least-one clauses.
pub fn emit_cnf(spec: &GridGraphSpec) -> String {
    emit_cnf_with(spec, CnfOptions::default())
}

pub fn emit_cnf_with(spec: &GridGraphSpec, opts: CnfOptions) -> String {
    let mut buf = Vec::new();
    write_cnf(spec, opts, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ASCII output")
}

pub fn write_cnf(spec: &GridGraphSpec, opts: CnfOptions, out: &mut impl Write) -> io::Result<()> {
    let edges = build_grid_graph(spec);
    let pinned = if opts.symmetry_breaking {
        greedy_clique(spec, &edges)
            .into_iter()
            .take(spec.m as usize)
            .collect()
    } else {
        Vec::new()
    };
    let clauses = edges.len() * spec.m as usize + spec.cells() + pinned.len();
    let mut w = io::BufWriter::new(out);
    writeln!(w, "c torus grid coloring s={} k={} m={}", spec.s, spec.k, spec.m)?;
    writeln!(w, "c var(x,y,c) = (x*s + y)*m + c + 1")?;
    writeln!(w, "p cnf {} {}", spec.num_vars(), clauses)?;
    for &(u, v) in &edges {
        for c in 0..spec.m {
            writeln!(w, "-{} -{} 0", spec.var(u, c), spec.var(v, c))?;
        }
    }
    let mut line = String::new();
    for u in 0..spec.cells() {
        line.clear();
        for c in 0..spec.m {
            let _ = write!(line, "{} ", spec.var(u, c));
        }
        writeln!(w, "{line}0")?;
    }
    for (color, &u) in pinned.iter().enumerate() {
        writeln!(w, "{} 0", spec.var(u, color as u32))?;
    }
    w.flush()
}

/// Greedy clique containing cell 0: repeatedly add the candidate with the most
/// neighbours among the remaining candidates (lowest index on ties).
pub fn greedy_clique(spec: &GridGraphSpec, edges: &[(usize, usize)]) -> Vec<usize> {
    let n = spec.cells();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let mut clique = vec![0];
    let mut cand: Vec<usize> = adj[0].clone();
    while !cand.is_empty() {
        let score = |x: usize| cand.iter().filter(|&&y| adj[x].binary_search(&y).is_ok()).count();
        let best = *cand
            .iter()
            .max_by(|&&a, &&b| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("non-empty");
        clique.push(best);
        cand.retain(|&y| y != best && adj[best].binary_search(&y).is_ok());
    }
    clique
}

/// An assignment of one of `m` colors to every cell of the `s × s` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridColoring {
    pub s: u32,
    pub m: u32,
    /// Indexed by `x·s + y`.
    pub colors: Vec<u32>,
}

impl GridColoring {
    pub fn color(&self, x: u32, y: u32) -> u32 {
        self.colors[x as usize * self.s as usize + y as usize]
    }

    /// First monochromatic edge of `G(s, k)`, if any.
    #[allow(clippy::type_complexity)]
    pub fn conflict(&self, k: u64) -> Option<((u32, u32), (u32, u32), u32)> {
        let spec = GridGraphSpec { s: self.s, k, m: self.m };
        let n = spec.cells();
        for u in 0..n {
            for v in (u + 1)..n {
                if self.colors[u] == self.colors[v] && spec.adjacent(spec.cell(u), spec.cell(v)) {
                    return Some((spec.cell(u), spec.cell(v), self.colors[u]));
                }
            }
        }
        None
    }

    /// `s` lines; line `x` lists the colors of cells `(x, 0) … (x, s−1)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.colors.chunks(self.s as usize) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, m: u32) -> Result<Self, SatError> {
        let rows: Vec<Vec<u32>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|e| SatError::Parse(format!("{t:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let s = rows.len();
        if s < 2 || rows.iter().any(|r| r.len() != s) {
            return Err(SatError::Parse("coloring must be s lines of s integers".into()));
        }
        let colors: Vec<u32> = rows.into_iter().flatten().collect();
        if let Some(c) = colors.iter().find(|&&c| c >= m) {
            return Err(SatError::Parse(format!("color {c} outside 0..{m}")));
        }
        Ok(Self { s: s as u32, m, colors })
    }
}

/// Reads a coloring out of a satisfying assignment; lowest true color wins.
pub fn decode_coloring(model: &[i64], spec: &GridGraphSpec) -> Result<GridColoring, SatError> {
    let mut truth = vec![false; spec.num_vars() + 1];
    for &lit in model {
        let var = lit.unsigned_abs() as usize;
        if lit > 0 && var < truth.len() {
            truth[var] = true;
        }
    }
    let mut colors = Vec::with_capacity(spec.cells());
    for u in 0..spec.cells() {
        let color = (0..spec.m).find(|&c| truth[spec.var(u, c) as usize]);
        match color {
            Some(c) => colors.push(c),
            None => {
                let (x, y) = spec.cell(u);
                return Err(SatError::IncompleteModel { x, y });
            }
        }
    }
    let coloring = GridColoring { s: spec.s, m: spec.m, colors };
    if let Some((a, b, color)) = coloring.conflict(spec.k) {
        return Err(SatError::ImproperColoring { a, b, color });
    }
    Ok(coloring)
}

/// Pixel partition induced by a coloring; `τ` is the exact largest part diameter.
///
/// Cell `(x, y)` becomes the square `[x/s, (x+1)/s] × [y/s, (y+1)/s]`, a
/// half-cell translate of the square centred on grid point `(x/s, y/s)`.
pub fn coloring_to_partition(c: &GridColoring) -> Partition<f64> {
    let mut groups: Vec<Vec<(u32, u32)>> = vec![Vec::new(); c.m as usize];
    for x in 0..c.s {
        for y in 0..c.s {
            groups[c.color(x, y) as usize].push((x, y));
        }
    }
    let sets: Vec<PixelSet> = groups
        .into_iter()
        .map(|cells| PixelSet::new(c.s, cells).expect("cells are distinct and in range"))
        .collect();
    let tau = sets.iter().map(PixelSet::diameter::<f64>).fold(0.0, f64::max);
    let regions = sets.into_iter().map(Region::Pixels).collect();
    Partition::new(regions, tau, format!("sat-grid s={} m={}", c.s, c.m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    UnsatCertified,
    SatWithColoring,
}

impl SatStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SatStatus::UnsatCertified => "unsat_certified",
            SatStatus::SatWithColoring => "sat_with_coloring",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "unsat_certified" => Some(SatStatus::UnsatCertified),
            "sat_with_coloring" => Some(SatStatus::SatWithColoring),
            _ => None,
        }
    }
}

/// Outcome of one `(m, s, k)` probe.
#[derive(Debug, Clone, PartialEq)]
pub struct SatBoundRecord {
    pub m: u32,
    pub s: u32,
    pub k: u64,
    pub status: SatStatus,
    pub coloring: Option<GridColoring>,
    pub wall_time_seconds: f64,
}

impl SatBoundRecord {
    pub fn unsat(m: u32, s: u32, k: u64) -> Self {
        Self { m, s, k, status: SatStatus::UnsatCertified, coloring: None, wall_time_seconds: 0.0 }
    }

    pub fn tau(&self) -> f64 {
        (self.k as f64).sqrt() / f64::from(self.s)
    }

    pub fn spec(&self) -> GridGraphSpec {
        GridGraphSpec { s: self.s, k: self.k, m: self.m }
    }
}

/// `d_m ≥ √k / s` for a grid graph with no proper `m`-coloring.
pub fn unsat_lower_bound(record: &SatBoundRecord) -> Result<f64, SatError> {
    match record.status {
        SatStatus::UnsatCertified => Ok(record.tau()),
        SatStatus::SatWithColoring => Err(SatError::State),
    }
}

/// The weaker `τ − √2/s` form of the same bound.
pub fn unsat_lower_bound_conservative(record: &SatBoundRecord) -> Result<f64, SatError> {
    unsat_lower_bound(record).map(|t| t - 2f64.sqrt() / f64::from(record.s))
}

/// Exhaustive colorability check for tiny grids (`s ≤ 4`, `m ≤ 6`).
///
/// Backtracking in cell order; a cell may only open one new color beyond
/// those already used, which removes color-permutation symmetry.
pub fn brute_force_colorable(spec: &GridGraphSpec) -> Result<bool, SatError> {
    if spec.s > 4 || spec.m > 6 {
        return Err(SatError::ResourceLimit { s: spec.s, m: spec.m });
    }
    let n = spec.cells();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..u).filter(|&v| spec.adjacent(spec.cell(u), spec.cell(v))).collect())
        .collect();
    let mut colors = vec![0u32; n];

    fn go(u: usize, used: u32, m: u32, nb: &[Vec<usize>], colors: &mut [u32]) -> bool {
        if u == colors.len() {
            return true;
        }
        let limit = (used + 1).min(m);
        for c in 0..limit {
            if nb[u].iter().all(|&v| colors[v] != c) {
                colors[u] = c;
                if go(u + 1, used.max(c + 1), m, nb, colors) {
                    return true;
                }
            }
        }
        false
    }
    Ok(go(0, 0, spec.m, &neighbours, &mut colors))
}

/// How to launch an external DIMACS solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub program: PathBuf,
    pub args: Vec<String>,
    /// Passed after the CNF path (kissat/cadical style DRAT output). Not checked.
    pub proof: Option<PathBuf>,
}

/// Environment variable naming the solver command line.
pub const SOLVER_ENV: &str = "TORUS_SAT_SOLVER";

impl SolverConfig {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self { program: program.into(), args: Vec::new(), proof: None }
    }

    /// Splits a whitespace-separated command line.
    pub fn from_command_line(cmd: &str) -> Option<Self> {
        let mut parts = cmd.split_whitespace();
        let program = parts.next()?;
        Some(Self {
            program: program.into(),
            args: parts.map(str::to_owned).collect(),
            proof: None,
        })
    }

    pub fn from_env() -> Option<Self> {
        std::env::var(SOLVER_ENV).ok().and_then(|c| Self::from_command_line(&c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Vec<i64>),
    Unsat,
    Unknown,
}

/// Parses SAT-competition output (`s …` status line, `v …` model lines),
/// falling back to the conventional exit codes 10 and 20.
pub fn parse_solver_output(stdout: &str, exit_code: Option<i32>) -> Verdict {
    let mut status = None;
    let mut model = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim().to_owned());
        } else if let Some(rest) = line.strip_prefix("v ") {
            model.extend(rest.split_whitespace().filter_map(|t| t.parse::<i64>().ok()).filter(|&l| l != 0));
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Verdict::Sat(model),
        Some("UNSATISFIABLE") => Verdict::Unsat,
        Some(_) => Verdict::Unknown,
        None => match exit_code {
            Some(10) => Verdict::Sat(model),
            Some(20) => Verdict::Unsat,
            _ => Verdict::Unknown,
        },
    }
}

/// Reads a model file: competition output or a bare list of literals.
pub fn parse_model_text(text: &str) -> Result<Vec<i64>, SatError> {
    if text.lines().any(|l| l.starts_with("s ") || l.starts_with("v ")) {
        return match parse_solver_output(text, None) {
            Verdict::Sat(model) => Ok(model),
            other => Err(SatError::Parse(format!("model file reports {other:?}"))),
        };
    }
    text.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|e| SatError::Parse(format!("{t:?}: {e}"))))
        .filter(|r| !matches!(r, Ok(0)))
        .collect()
}

/// Writes the CNF to `cnf_path` and runs the solver on it.
pub fn run_solver_on_file(config: &SolverConfig, cnf_path: &Path) -> Result<(Verdict, f64), SatError> {
    let mut cmd = Command::new(&config.program);
    cmd.args(&config.args).arg(cnf_path);
    if let Some(proof) = &config.proof {
        cmd.arg(proof);
    }
    let start = Instant::now();
    let out = cmd
        .output()
        .map_err(|e| SatError::Solver(format!("cannot run {}: {e}", config.program.display())))?;
    let elapsed = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let verdict = parse_solver_output(&stdout, out.status.code());
    if verdict == Verdict::Unknown {
        let stderr = String::from_utf8_lossy(&out.stderr);
        return Err(SatError::Solver(format!(
            "no verdict (exit {:?}): {}",
            out.status.code(),
            stderr.lines().last().unwrap_or("")
        )));
    }
    Ok((verdict, elapsed))
}

/// Encodes, solves and interprets one grid instance.
pub fn solve_grid(
    spec: &GridGraphSpec,
    config: &SolverConfig,
    opts: CnfOptions,
) -> Result<SatBoundRecord, SatError> {
    let mut file = tempfile::Builder::new().prefix("torus-grid-").suffix(".cnf").tempfile()?;
    write_cnf(spec, opts, file.as_file_mut())?;
    file.as_file_mut().flush()?;
    let (verdict, wall_time_seconds) = run_solver_on_file(config, file.path())?;
    let (status, coloring) = match verdict {
        Verdict::Unsat => (SatStatus::UnsatCertified, None),
        Verdict::Sat(model) => (SatStatus::SatWithColoring, Some(decode_coloring(&model, spec)?)),
        Verdict::Unknown => unreachable!("filtered by run_solver_on_file"),
    };
    Ok(SatBoundRecord { m: spec.m, s: spec.s, k: spec.k, status, coloring, wall_time_seconds })
}

/// Runs independent probes on the rayon pool; output order follows input order.
pub fn solve_batch(
    specs: &[GridGraphSpec],
    config: &SolverConfig,
    opts: CnfOptions,
) -> Vec<Result<SatBoundRecord, SatError>> {
    specs.par_iter().map(|s| solve_grid(s, config, opts)).collect()
}

pub const RESULTS_HEADER: &str = "m,s,k,status,wall_time_seconds";

pub fn result_row(r: &SatBoundRecord) -> String {
    format!("{},{},{},{},{:.3}", r.m, r.s, r.k, r.status.as_str(), r.wall_time_seconds)
}

/// Appends one row to the results store, writing the header for a new file.
pub fn append_result(path: &Path, record: &SatBoundRecord) -> Result<(), SatError> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{RESULTS_HEADER}")?;
    }
    writeln!(f, "{}", result_row(record))?;
    Ok(())
}

/// Parses a results store. Colorings are not part of the store.
pub fn parse_results(text: &str) -> Result<Vec<SatBoundRecord>, SatError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == RESULTS_HEADER {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || SatError::Parse(format!("results line {}: {line:?}", n + 1));
        if f.len() != 5 {
            return Err(bad());
        }
        out.push(SatBoundRecord {
            m: f[0].parse().map_err(|_| bad())?,
            s: f[1].parse().map_err(|_| bad())?,
            k: f[2].parse().map_err(|_| bad())?,
            status: SatStatus::parse(f[3]).ok_or_else(bad)?,
            coloring: None,
            wall_time_seconds: f[4].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

/// Grid instances shown UNSAT in the published runs, with their reported
/// solver times. Two further `m = 6` rows (`s = 24, 30`) never finished and
/// are not included.
pub fn published_unsat_records() -> Vec<SatBoundRecord> {
    parse_results(include_str!("../data/sat_unsat.csv")).expect("bundled data parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let k4 = GridGraphSpec::new(2, 1, 1).unwrap();
        assert_eq!(build_grid_graph(&k4).len(), 6);
        let empty = GridGraphSpec::new(3, 5, 1).unwrap();
        assert!(build_grid_graph(&empty).is_empty());
    }

    #[test]
    fn antipodal_graph_by_enumeration() {
        let spec = GridGraphSpec::new(4, 8, 2).unwrap();
        let edges = build_grid_graph(&spec);
        // Independent enumeration of all 120 pairs via float torus distance.
        let mut expected = Vec::new();
        for u in 0..16usize {
            for v in (u + 1)..16 {
                let (a, b) = ((u / 4) as f64, (u % 4) as f64);
                let (c, d) = ((v / 4) as f64, (v % 4) as f64);
                let dx = (a - c).abs().min(4.0 - (a - c).abs());
                let dy = (b - d).abs().min(4.0 - (b - d).abs());
                if dx * dx + dy * dy >= 8.0 - 1e-9 {
                    expected.push((u, v));
                }
            }
        }
        assert_eq!(edges, expected);
        assert_eq!(edges.len(), 8);
        assert!(edges.iter().all(|&(u, v)| {
            let (a, b) = (spec.cell(u), spec.cell(v));
            a.0.abs_diff(b.0) == 2 && a.1.abs_diff(b.1) == 2
        }));
    }

    #[test]
    fn spec_validation() {
        assert!(GridGraphSpec::new(1, 1, 1).is_err());
        assert!(GridGraphSpec::new(2, 0, 1).is_err());
        assert!(GridGraphSpec::new(2, 1, 0).is_err());
        assert!((GridGraphSpec::new(9, 16, 7).unwrap().tau() - 4.0 / 9.0).abs() < 1e-15);
    }

    fn header(cnf: &str) -> (usize, usize) {
        let line = cnf.lines().find(|l| l.starts_with("p cnf")).unwrap();
        let f: Vec<usize> = line[6..].split_whitespace().map(|t| t.parse().unwrap()).collect();
        (f[0], f[1])
    }

    #[test]
    fn cnf_counts() {
        let cnf = emit_cnf(&GridGraphSpec::new(2, 1, 2).unwrap());
        assert_eq!(header(&cnf), (8, 16));
        let body: Vec<&str> = cnf.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).collect();
        assert_eq!(body.len(), 16);
        assert!(body.contains(&"-1 -3 0"), "w(0,0) vs w(1,0)");
        assert!(body.contains(&"1 2 0"));

        let cnf = emit_cnf(&GridGraphSpec::new(3, 5, 1).unwrap());
        assert_eq!(header(&cnf), (9, 9));
        let units: Vec<&str> = cnf.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).collect();
        assert_eq!(units, (1..=9).map(|v| format!("{v} 0")).collect::<Vec<_>>());
    }

    #[test]
    fn symmetry_breaking_pins_a_clique() {
        let spec = GridGraphSpec::new(2, 1, 4).unwrap();
        let cnf = emit_cnf_with(&spec, CnfOptions { symmetry_breaking: true });
        assert_eq!(header(&cnf), (16, 6 * 4 + 4 + 4));
        let edges = build_grid_graph(&spec);
        let clique = greedy_clique(&spec, &edges);
        assert_eq!(clique.len(), 4);
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                assert!(spec.adjacent(spec.cell(a), spec.cell(b)));
            }
        }
    }

    #[test]
    fn decoding() {
        let spec = GridGraphSpec::new(2, 1, 4).unwrap();
        let model: Vec<i64> = (0..4)
            .flat_map(|u| (0..4).map(move |c| if c == u { spec.var(u as usize, c) } else { -spec.var(u as usize, c) }))
            .collect();
        let c = decode_coloring(&model, &spec).unwrap();
        assert_eq!(c.colors, vec![0, 1, 2, 3]);

        let anti = GridGraphSpec::new(4, 8, 2).unwrap();
        let all_zero: Vec<i64> = (0..16).map(|u| anti.var(u, 0)).collect();
        assert!(matches!(decode_coloring(&all_zero, &anti), Err(SatError::ImproperColoring { .. })));
        assert!(matches!(decode_coloring(&[1, 2], &anti), Err(SatError::IncompleteModel { x: 0, y: 1 })));
    }

    #[test]
    fn lowest_true_color_wins() {
        let spec = GridGraphSpec::new(3, 5, 3).unwrap();
        let model: Vec<i64> = (1..=27).collect();
        assert!(decode_coloring(&model, &spec).unwrap().colors.iter().all(|&c| c == 0));
    }

    #[test]
    fn coloring_partitions() {
        let c = GridColoring { s: 2, m: 4, colors: vec![0, 1, 2, 3] };
        let p = coloring_to_partition(&c);
        assert_eq!(p.regions.len(), 4);
        assert!((p.tau - 2f64.sqrt() / 2.0).abs() < 1e-15);

        let mono = GridColoring { s: 3, m: 1, colors: vec![0; 9] };
        let p = coloring_to_partition(&mono);
        assert!((p.tau - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn coloring_text_round_trip() {
        let c = GridColoring { s: 3, m: 3, colors: vec![0, 1, 2, 2, 0, 1, 1, 2, 0] };
        assert_eq!(c.to_text(), "0 1 2\n2 0 1\n1 2 0\n");
        assert_eq!(GridColoring::from_text(&c.to_text(), 3).unwrap(), c);
        assert!(GridColoring::from_text("0 1\n1\n", 2).is_err());
        assert!(GridColoring::from_text("0 5\n1 0\n", 2).is_err());
    }

    #[test]
    fn lower_bounds_from_records() {
        let r = SatBoundRecord::unsat(7, 9, 16);
        assert!((unsat_lower_bound(&r).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!((unsat_lower_bound_conservative(&r).unwrap() - (4.0 / 9.0 - 2f64.sqrt() / 9.0)).abs() < 1e-15);
        let mut sat = r.clone();
        sat.status = SatStatus::SatWithColoring;
        assert!(matches!(unsat_lower_bound(&sat), Err(SatError::State)));
    }

    #[test]
    fn brute_force_small_cases() {
        let k4 = |m| GridGraphSpec::new(2, 1, m).unwrap();
        assert!(!brute_force_colorable(&k4(3)).unwrap());
        assert!(brute_force_colorable(&k4(4)).unwrap());
        assert!(brute_force_colorable(&GridGraphSpec::new(3, 5, 1).unwrap()).unwrap());
        assert!(matches!(
            brute_force_colorable(&GridGraphSpec::new(5, 1, 2).unwrap()),
            Err(SatError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn solver_output_parsing() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2 3\nv -4 0\n";
        assert_eq!(parse_solver_output(out, Some(10)), Verdict::Sat(vec![1, -2, 3, -4]));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", Some(20)), Verdict::Unsat);
        assert_eq!(parse_solver_output("", Some(20)), Verdict::Unsat);
        assert_eq!(parse_solver_output("s UNKNOWN\n", Some(0)), Verdict::Unknown);
        assert_eq!(parse_model_text("1 -2 3 0").unwrap(), vec![1, -2, 3]);
        assert_eq!(parse_model_text(out).unwrap(), vec![1, -2, 3, -4]);
        assert!(parse_model_text("s UNSATISFIABLE\n").is_err());
    }

    #[test]
    fn results_store() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let mut r = SatBoundRecord::unsat(6, 18, 73);
        r.wall_time_seconds = 1.5;
        append_result(&path, &r).unwrap();
        append_result(&path, &r).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next(), Some(RESULTS_HEADER));
        let parsed = parse_results(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0], r);
    }

    #[test]
    fn bundled_records() {
        let recs = published_unsat_records();
        let keys: Vec<_> = recs.iter().map(|r| (r.m, r.s, r.k)).collect();
        assert_eq!(keys, vec![(4, 200, 12401), (5, 170, 7850), (6, 18, 73), (7, 9, 16)]);
    }
}
