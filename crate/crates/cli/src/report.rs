//! The analysis pipeline (matrix, `N`, `G`, `G̃`, invariants, graphs,
//! numerics) and the serializable reports produced by each subcommand.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use htwist_core::group::DEFAULT_AUTOMORPHISM_BOUND;
use htwist_core::hadamard::{fourier_conjugate, fourier_matrix, hadamard_equivalent, parse_complex_hadamard, parse_real_hadamard};
use htwist_core::quotient::{
    char_invariant, cyclic_cocycle_test, identify_group, normal_subgroup_structure, CocycleTest, ExtendedGroup,
    GroupDescriptor, Normalization, QuotientGroup, DEFAULT_GROUP_BOUND,
};
use htwist_core::word::Side;
use htwist_core::{
    dual_graph, principal_graph, subfactor_verdict, truncated_graph, AbelianStructure, BipartiteGraph, Error as CoreError,
    FinGroup, HadamardMatrix, Phase, PhaseOrder, Twist, VerdictReport,
};
use htwist_numerics::{commutant_is_abelian, relative_commutant_dim};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::spec::AnalysisSpec;

pub const DEFAULT_RADIUS: usize = 3;
pub const DEFAULT_LEVEL: usize = 1;
/// Largest matrix size sent to the numerics, indexed by level.
pub const NUMERICS_SIZE_LIMIT: [usize; 3] = [64, 16, 6];

/// Per-run settings that override the spec's own options.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub emit_dot: Option<PathBuf>,
    pub radius: Option<usize>,
    pub level: Option<usize>,
    pub numerics: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            emit_dot: None,
            radius: None,
            level: None,
            numerics: true,
        }
    }
}

/// JSON with sorted keys.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("reports serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub trait Render {
    fn text(&self) -> String;
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixCheck {
    pub size: usize,
    pub hadamard: bool,
    pub rational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalSubgroup {
    pub structure: String,
    pub torsion: Vec<u64>,
    pub free_rank: usize,
    pub order: Option<u64>,
}

impl From<&AbelianStructure> for NormalSubgroup {
    fn from(s: &AbelianStructure) -> Self {
        NormalSubgroup {
            structure: s.to_string(),
            torsion: s.torsion.clone(),
            free_rank: s.free_rank,
            order: s.order(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub descriptor: String,
    pub locally_free: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InnerVector {
    pub inner: usize,
    pub vector: Vec<Phase>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendedSummary {
    pub order: usize,
    /// `|S|`, the inner part of `N` in `G̃`.
    pub inner_order: usize,
    pub inner_structure: String,
    pub implementing_vectors: Vec<InnerVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaRow {
    pub generator: String,
    pub inner: usize,
    pub value: Phase,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub odd_vertices: usize,
    pub even_vertices: usize,
    pub clusters: usize,
    pub degree: usize,
    pub truncated: bool,
    pub radius: Option<usize>,
    pub boundary_vertices: usize,
    pub hash: String,
    pub level1_dimension: Option<u64>,
    pub annotation: Option<String>,
    pub dot_file: Option<String>,
}

impl GraphSummary {
    fn new(g: &BipartiteGraph, radius: Option<usize>, dot_file: Option<String>) -> Self {
        GraphSummary {
            odd_vertices: g.odd_count(),
            even_vertices: g.even_count(),
            clusters: g.clusters.len(),
            degree: g.degree,
            truncated: g.truncated,
            radius,
            boundary_vertices: g.odd.iter().filter(|v| v.boundary).count(),
            hash: g.canonical_hash(),
            level1_dimension: (!g.truncated).then(|| g.predicted_commutant_dim(1)),
            annotation: g.annotation.clone(),
            dot_file,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericsSummary {
    pub level: usize,
    pub dimension: Option<usize>,
    pub level1_abelian: Option<bool>,
    pub predicted: Option<u64>,
    pub agrees: Option<bool>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub spec: AnalysisSpec,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "K")]
    pub k: String,
    pub orientation: htwist_core::Orientation,
    pub twist: Vec<Phase>,
    pub matrix: Option<MatrixCheck>,
    pub normal_subgroup: NormalSubgroup,
    pub group: Option<GroupSummary>,
    pub extended: Option<ExtendedSummary>,
    pub lambda: Vec<LambdaRow>,
    pub cocycle: Option<CocycleTest>,
    pub principal_graph: Option<GraphSummary>,
    pub dual_graph: Option<GraphSummary>,
    pub numerics: Option<NumericsSummary>,
    pub warnings: Vec<String>,
}

fn matrix_check(twist: &Twist) -> Result<Option<(MatrixCheck, Option<HadamardMatrix>)>> {
    match twist.matrix() {
        Ok(m) => Ok(Some((
            MatrixCheck {
                size: m.size(),
                hadamard: true,
                rational: m.is_rational(),
            },
            Some(m),
        ))),
        Err(CoreError::NotHadamard) => {
            let size = twist.h().order() * twist.k().order();
            Ok(Some((
                MatrixCheck {
                    size,
                    hadamard: false,
                    rational: twist.is_rational(),
                },
                None,
            )))
        }
        Err(CoreError::NonAbelian) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Names the graph family when the twist belongs to a recognized one.
pub fn graph_annotation(twist: &Twist, n: &AbelianStructure) -> Option<String> {
    let orders = (twist.h().order(), twist.k().order());
    match orders {
        (2, 2) => Some(match n.order() {
            Some(l) => format!("D^{{(1)}}_{{{}}}", 2 * l + 1),
            None => "D_∞".into(),
        }),
        (2, 3) | (3, 2) if n.free_rank == 2 && n.torsion.is_empty() => Some("G_{2,3,6}".into()),
        _ => None,
    }
}

fn warnings_for(twist: &Twist, n: &AbelianStructure, group: Option<usize>, extended: Option<usize>) -> Vec<String> {
    let mut out = Vec::new();
    let z3: FinGroup = FinGroup::cyclic(3);
    if twist.h() == &z3 && twist.k() == &z3 && n.order() == Some(3) {
        if let (Some(g), Some(e)) = (group, extended) {
            out.push(format!(
                "computed |G| = {g} and |G̃| = {e} follow |G| = |H||K||N|; the orders 81 and 243 published for this \
                 example disagree"
            ));
        }
    }
    let orders = (twist.h().order(), twist.k().order());
    if matches!(orders, (2, 3) | (3, 2)) && n.free_rank == 2 && n.torsion.is_empty() {
        out.push("N is free abelian of rank 2; the published description writes it as Z_2^2".into());
    }
    out
}

fn write_dot(dir: &Path, file: &str, graph: &BipartiteGraph, name: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(file);
    std::fs::write(&path, graph.to_dot(name)).map_err(|source| CliError::Io { path, source })
}

fn lambda_label(grp: &QuotientGroup, side: Side, x: usize) -> String {
    match side {
        Side::H => format!("h{}", grp.twist().h().elem_label(x)),
        Side::K => format!("k{}", grp.twist().k().elem_label(x)),
    }
}

pub fn analyze(spec: &AnalysisSpec, opts: &RunOptions) -> Result<AnalysisReport> {
    let twist = spec.resolve()?;
    let (h, k, _) = spec.expanded()?;
    let n = normal_subgroup_structure(&twist);
    let matrix = matrix_check(&twist)?;
    let level = opts.level.or(spec.options.level).unwrap_or(DEFAULT_LEVEL);
    let radius = opts.radius.or(spec.options.radius).unwrap_or(DEFAULT_RADIUS);
    let annotation = graph_annotation(&twist, &n);
    let label = spec.label();
    let mut warnings = Vec::new();

    let mut report = AnalysisReport {
        spec: spec.clone(),
        h,
        k,
        orientation: twist.orientation(),
        twist: twist.values().entries().to_vec(),
        matrix: matrix.as_ref().map(|(c, _)| c.clone()),
        normal_subgroup: NormalSubgroup::from(&n),
        group: None,
        extended: None,
        lambda: Vec::new(),
        cocycle: None,
        principal_graph: None,
        dual_graph: None,
        numerics: None,
        warnings: Vec::new(),
    };

    let mut graphs: Option<(BipartiteGraph, BipartiteGraph)> = None;
    let mut graph_radius = None;
    if n.is_finite() {
        let g = QuotientGroup::build(&twist, Normalization::Standard, DEFAULT_GROUP_BOUND)?;
        let ext = ExtendedGroup::build(&twist, DEFAULT_GROUP_BOUND)?;
        report.group = Some(GroupSummary {
            order: g.order(),
            abelian: g.is_abelian(),
            descriptor: identify_group(&g).to_string(),
            locally_free: g.is_locally_free(),
        });
        report.extended = Some(ExtendedSummary {
            order: ext.order(),
            inner_order: ext.inner_order(),
            inner_structure: ext.inner_structure().to_string(),
            implementing_vectors: ext
                .inner()
                .iter()
                .map(|&s| InnerVector {
                    inner: s,
                    vector: ext.implementing_vector(s),
                })
                .collect(),
        });
        report.lambda = char_invariant(&ext)?
            .entries
            .into_iter()
            .map(|e| LambdaRow {
                generator: lambda_label(ext.group(), e.side, e.generator),
                inner: e.inner,
                value: e.value,
            })
            .collect();
        report.cocycle = Some(cyclic_cocycle_test(&ext)?);
        match (principal_graph(&g), dual_graph(&g)) {
            (Ok(p), Ok(d)) => graphs = Some((p, d)),
            (Err(CoreError::NotLocallyFree), _) | (_, Err(CoreError::NotLocallyFree)) => {
                warnings.push("G is not locally free; principal graphs are not computed".into())
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
        warnings.extend(warnings_for(&twist, &n, Some(g.order()), Some(ext.order())));
    } else {
        graphs = Some((
            truncated_graph(&twist, radius, false)?,
            truncated_graph(&twist, radius, true)?,
        ));
        graph_radius = Some(radius);
        warnings.extend(warnings_for(&twist, &n, None, None));
    }

    if let Some((p, d)) = graphs {
        let (p, d) = match &annotation {
            Some(a) => (p.with_annotation(a.clone()), d.with_annotation(a.clone())),
            None => (p, d),
        };
        let mut files = [None, None];
        if let Some(dir) = &opts.emit_dot {
            for (i, (g, kind)) in [(&p, "principal"), (&d, "dual")].into_iter().enumerate() {
                let file = format!("{label}_{kind}.dot");
                write_dot(dir, &file, g, kind)?;
                files[i] = Some(file);
            }
        }
        let [pf, df] = files;
        report.numerics = opts
            .numerics
            .then(|| numerics_summary(matrix.as_ref().and_then(|(_, m)| m.as_ref()), level, &p))
            .flatten();
        report.principal_graph = Some(GraphSummary::new(&p, graph_radius, pf));
        report.dual_graph = Some(GraphSummary::new(&d, graph_radius, df));
    }
    if let Some(nr) = &report.numerics {
        if nr.agrees == Some(false) {
            warnings.push(format!(
                "numerical dimension {:?} differs from the graph prediction {:?}",
                nr.dimension, nr.predicted
            ));
        }
    }
    report.warnings = warnings;
    Ok(report)
}

fn numerics_summary(m: Option<&HadamardMatrix>, level: usize, graph: &BipartiteGraph) -> Option<NumericsSummary> {
    let m = m?;
    let predicted = (!graph.truncated).then(|| graph.predicted_commutant_dim(level));
    let mut out = NumericsSummary {
        level,
        dimension: None,
        level1_abelian: None,
        predicted,
        agrees: None,
        skipped: None,
    };
    if !m.is_rational() {
        out.skipped = Some("matrix has irrational phases".into());
        return Some(out);
    }
    let limit = NUMERICS_SIZE_LIMIT.get(level).copied().unwrap_or(0);
    if m.size() > limit {
        out.skipped = Some(format!("size {} exceeds the level-{level} limit {limit}", m.size()));
        return Some(out);
    }
    match relative_commutant_dim(m, level) {
        Ok(d) => {
            out.dimension = Some(d);
            out.agrees = predicted.map(|p| p == d as u64);
        }
        Err(e) => {
            out.skipped = Some(e.to_string());
            return Some(out);
        }
    }
    if m.size() <= NUMERICS_SIZE_LIMIT[1] {
        match commutant_is_abelian(m, 1) {
            Ok(a) => out.level1_abelian = Some(a),
            Err(e) => out.skipped = Some(e.to_string()),
        }
    }
    Some(out)
}

/// Runs independent analyses on separate threads; results keep input order.
pub fn analyze_batch(specs: &[AnalysisSpec], opts: &RunOptions) -> Vec<Result<AnalysisReport>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = specs.iter().map(|s| scope.spawn(move || analyze(s, opts))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".into(), T::to_string)
}

impl Render for AnalysisReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let twist: Vec<String> = self.twist.iter().map(Phase::to_string).collect();
        let _ = writeln!(s, "H = {}, K = {}, twist = ({})", self.h, self.k, twist.join(", "));
        if let Some(m) = &self.matrix {
            let _ = writeln!(s, "matrix: {0}x{0}, hadamard {1}, rational {2}", m.size, m.hadamard, m.rational);
        }
        let _ = writeln!(s, "N = {}", self.normal_subgroup.structure);
        if let Some(g) = &self.group {
            let _ = writeln!(
                s,
                "|G| = {} ({}), abelian {}, locally free {}",
                g.order, g.descriptor, g.abelian, g.locally_free
            );
        }
        if let Some(e) = &self.extended {
            let _ = writeln!(s, "|G̃| = {}, |S| = {} ({})", e.order, e.inner_order, e.inner_structure);
        }
        for row in &self.lambda {
            let _ = writeln!(s, "lambda({}, s{}) = {}", row.generator, row.inner, row.value);
        }
        if let Some(c) = &self.cocycle {
            let _ = match c {
                CocycleTest::Witness {
                    element,
                    cyclic_order,
                    power,
                    lambda,
                } => writeln!(
                    s,
                    "cocycle witness: <{element}> of order {cyclic_order}, inner power {power}, lambda {lambda}"
                ),
                CocycleTest::Inconclusive => writeln!(s, "cocycle: inconclusive"),
            };
        }
        for (name, g) in [("principal", &self.principal_graph), ("dual", &self.dual_graph)] {
            if let Some(g) = g {
                let _ = writeln!(
                    s,
                    "{name} graph: {} odd, {} even, {} clusters, degree {}, level-1 {}, annotation {}, hash {}{}",
                    g.odd_vertices,
                    g.even_vertices,
                    g.clusters,
                    g.degree,
                    opt(&g.level1_dimension),
                    opt(&g.annotation),
                    &g.hash[..16],
                    if g.truncated { " (truncated)" } else { "" }
                );
            }
        }
        if let Some(n) = &self.numerics {
            let _ = writeln!(
                s,
                "numerics: level {}, dimension {}, predicted {}, level-1 abelian {}{}",
                n.level,
                opt(&n.dimension),
                opt(&n.predicted),
                opt(&n.level1_abelian),
                n.skipped.as_ref().map(|r| format!(" (skipped: {r})")).unwrap_or_default()
            );
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classify4Report {
    pub delta: Phase,
    /// Least `l` with `δ^{4l} = 1`; absent for irrational `δ`.
    pub l: Option<u64>,
    pub infinite_depth: bool,
    pub normal_subgroup: String,
    pub group: String,
    pub group_order: Option<usize>,
    pub computed_descriptor: Option<String>,
    /// `δ^{2l}`, which is `±1`.
    pub delta_2l: Option<Phase>,
    pub cocycle: String,
    pub witness: Option<CocycleTest>,
    pub annotation: String,
    pub identification: Option<String>,
    pub consistent: bool,
    pub principal_graph: Option<GraphSummary>,
}

pub fn classify4(delta: &str, opts: &RunOptions) -> Result<Classify4Report> {
    let phase: Phase = delta.parse()?;
    let spec = AnalysisSpec::preset(format!("index4:delta={delta}"));
    let opts = RunOptions {
        numerics: false,
        ..opts.clone()
    };
    let analysis = analyze(&spec, &opts)?;
    let witness = analysis.cocycle.clone();
    let Some(group) = &analysis.group else {
        let consistent = matches!(phase.pow(4).order(), PhaseOrder::Infinite);
        return Ok(Classify4Report {
            delta: phase,
            l: None,
            infinite_depth: true,
            normal_subgroup: analysis.normal_subgroup.structure,
            group: "D_∞".into(),
            group_order: None,
            computed_descriptor: None,
            delta_2l: None,
            cocycle: "none (infinite depth)".into(),
            witness: None,
            annotation: "D_∞".into(),
            identification: None,
            consistent,
            principal_graph: analysis.principal_graph,
        });
    };
    let PhaseOrder::Finite(l) = phase.pow(4).order() else {
        return Err(CliError::Spec("finite group for an irrational δ".into()));
    };
    let d2l = phase.pow(2 * l as i64);
    let minus = d2l == Phase::new(1, 2);
    let has_witness = witness.as_ref().is_some_and(CocycleTest::is_witness);
    let dihedral = if l == 1 {
        GroupDescriptor::Abelian(vec![2, 2])
    } else {
        GroupDescriptor::Dihedral(2 * l as usize)
    };
    let consistent = analysis.normal_subgroup.order == Some(l)
        && analysis.normal_subgroup.torsion.len() <= 1
        && group.order as u64 == 4 * l
        && group.descriptor == dihedral.to_string()
        && has_witness == minus;
    let identification = (l == 1).then(|| if minus { "R ⊂ R⋊Z4" } else { "R ⊂ R⋊Z2^2" }.to_string());
    Ok(Classify4Report {
        delta: phase,
        l: Some(l),
        infinite_depth: false,
        normal_subgroup: analysis.normal_subgroup.structure,
        group: format!("Dihedral({})", 2 * l),
        group_order: Some(group.order),
        computed_descriptor: Some(group.descriptor.clone()),
        delta_2l: Some(d2l),
        cocycle: if minus { "nontrivial" } else { "trivial" }.into(),
        witness,
        annotation: format!("D^{{(1)}}_{{{}}}", 2 * l + 1),
        identification,
        consistent,
        principal_graph: analysis.principal_graph,
    })
}

impl Render for Classify4Report {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "delta = {}", self.delta);
        match self.l {
            Some(l) => {
                let _ = writeln!(s, "l = {l}, N = {}", self.normal_subgroup);
                let _ = writeln!(
                    s,
                    "G = {} of order {} (computed {})",
                    self.group,
                    opt(&self.group_order),
                    opt(&self.computed_descriptor)
                );
                let _ = writeln!(s, "delta^(2l) = {}, cocycle {}", opt(&self.delta_2l), self.cocycle);
            }
            None => {
                let _ = writeln!(s, "infinite depth, N = {}, G = {}", self.normal_subgroup, self.group);
            }
        }
        let _ = writeln!(s, "principal graph {}", self.annotation);
        if let Some(id) = &self.identification {
            let _ = writeln!(s, "identification: {id}");
        }
        let _ = writeln!(s, "consistent: {}", self.consistent);
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub a: AnalysisSpec,
    pub b: AnalysisSpec,
    pub verdict: VerdictReport,
}

pub fn compare(a: &AnalysisSpec, b: &AnalysisSpec) -> Result<CompareReport> {
    let (ta, tb) = (a.resolve()?, b.resolve()?);
    let aut_bound = a
        .options
        .automorphism_bound
        .max(b.options.automorphism_bound)
        .unwrap_or(DEFAULT_AUTOMORPHISM_BOUND);
    let verdict = subfactor_verdict(&ta, &tb, DEFAULT_GROUP_BOUND, aut_bound)?;
    Ok(CompareReport {
        a: a.clone(),
        b: b.clone(),
        verdict,
    })
}

impl Render for CompareReport {
    fn text(&self) -> String {
        let v = &self.verdict;
        let mut s = format!("{}: {}\n", v.verdict, v.reason);
        if let Some([x, y]) = &v.descriptors {
            let _ = writeln!(s, "groups: {x} / {y}");
        }
        if let Some(eq) = v.invariants_equivalent {
            let _ = writeln!(s, "invariants equivalent: {eq}");
        }
        s
    }
}

/// A matrix from a text file (rows of `+`/`-`, or comma-separated phase
/// literals), a JSON spec file, or a preset.
pub fn load_matrix(source: &str) -> Result<HadamardMatrix> {
    let path = Path::new(source);
    let is_json = path.extension().is_some_and(|e| e == "json");
    if path.is_file() && !is_json {
        let text = std::fs::read_to_string(path).map_err(|source_err| CliError::Io {
            path: path.to_path_buf(),
            source: source_err,
        })?;
        let real = text.chars().all(|c| matches!(c, '+' | '-') || c.is_whitespace());
        return Ok(if real {
            parse_real_hadamard(&text)?
        } else {
            parse_complex_hadamard(&text)?
        });
    }
    Ok(AnalysisSpec::load(source)?.resolve()?.matrix()?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    pub source: String,
    pub size: usize,
    pub level: usize,
    pub dimension: usize,
    pub level1_abelian: Option<bool>,
    pub predicted: Option<u64>,
    pub agrees: Option<bool>,
}

pub fn commutant_of_matrix(source: &str, m: &HadamardMatrix, level: usize) -> Result<CommutantReport> {
    let dimension = relative_commutant_dim(m, level)?;
    let level1_abelian = (m.size() <= NUMERICS_SIZE_LIMIT[1])
        .then(|| commutant_is_abelian(m, 1))
        .transpose()?;
    Ok(CommutantReport {
        source: source.into(),
        size: m.size(),
        level,
        dimension,
        level1_abelian,
        predicted: None,
        agrees: None,
    })
}

/// Numerical dimension for a spec, cross-checked against the principal
/// graph when the twist has finite depth.
pub fn commutant_of_spec(source: &str, spec: &AnalysisSpec, level: usize) -> Result<CommutantReport> {
    let twist = spec.resolve()?;
    let mut report = commutant_of_matrix(source, &twist.matrix()?, level)?;
    if normal_subgroup_structure(&twist).is_finite() {
        let g = QuotientGroup::build(&twist, Normalization::Standard, DEFAULT_GROUP_BOUND)?;
        if let Ok(p) = principal_graph(&g) {
            let predicted = p.predicted_commutant_dim(level);
            report.predicted = Some(predicted);
            report.agrees = Some(predicted == report.dimension as u64);
        }
    }
    Ok(report)
}

/// Accepts the same sources as [`load_matrix`]; specs get the graph
/// cross-check.
pub fn commutant(source: &str, level: usize) -> Result<CommutantReport> {
    let path = Path::new(source);
    if path.is_file() && path.extension().is_none_or(|e| e != "json") {
        return commutant_of_matrix(source, &load_matrix(source)?, level);
    }
    commutant_of_spec(source, &AnalysisSpec::load(source)?, level)
}

impl Render for CommutantReport {
    fn text(&self) -> String {
        format!(
            "{}: size {}, level {}, dimension {}, level-1 abelian {}, predicted {}\n",
            self.source,
            self.size,
            self.level,
            self.dimension,
            opt(&self.level1_abelian),
            opt(&self.predicted)
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierReport {
    pub group: String,
    pub conjugate: bool,
    pub size: usize,
    pub rows: Vec<Vec<Phase>>,
}

pub fn fourier(group: &str, conjugate: bool) -> Result<FourierReport> {
    let g: FinGroup = group.parse()?;
    let m = if conjugate {
        fourier_conjugate(&g)?
    } else {
        fourier_matrix(&g)?
    };
    let n = m.size();
    Ok(FourierReport {
        group: g.to_string(),
        conjugate,
        size: n,
        rows: (0..n).map(|i| (0..n).map(|j| m.angle(i, j).clone()).collect()).collect(),
    })
}

impl Render for FourierReport {
    /// One row per line, in the format read back by `equiv` and `commutant`.
    fn text(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(Phase::to_string).collect::<Vec<_>>().join(",") + "\n")
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivReport {
    pub a: String,
    pub b: String,
    pub size: [usize; 2],
    pub bound: usize,
    pub equivalent: bool,
}

pub fn equiv(a: &str, b: &str, bound: usize) -> Result<EquivReport> {
    let (ma, mb) = (load_matrix(a)?, load_matrix(b)?);
    Ok(EquivReport {
        a: a.into(),
        b: b.into(),
        size: [ma.size(), mb.size()],
        bound,
        equivalent: hadamard_equivalent(&ma, &mb, bound)?,
    })
}

impl Render for EquivReport {
    fn text(&self) -> String {
        let word = if self.equivalent { "equivalent" } else { "not equivalent" };
        format!("{} and {} are {word}\n", self.a, self.b)
    }
}
