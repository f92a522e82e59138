//! Frobenius on `H^1(Z, O_Z)` for a simple normal crossing configuration of
//! curves `Z = ∪ Z_i`, the reduced exceptional fiber of a resolution of a
//! normal surface singularity.
//!
//! The Mayer–Vietoris sequence of the configuration gives
//! `0 -> H^1(Γ, F_p) ⊗ k -> H^1(Z, O_Z) -> ⊕ H^1(Z_i, O_{Z_i}) -> 0`, where
//! `Γ` is the dual graph. Frobenius acts as the identity on the graph part
//! (it is spanned by `F_p`-valued cochains), and on each component by that
//! component's Hasse–Witt operator. The singularity is F-nilpotent exactly
//! when the whole action is nilpotent, i.e. when `Γ` is a forest and every
//! component operator is nilpotent.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::fields::{FieldError, FiniteField};
use crate::lochom::{HypersurfaceData, IsolatedCheck, LochomError, Verdict};
use crate::matrix::Matrix;
use crate::polynomials::{IntegerPoly, IntegerTerm, PolyError, WeightSystem};
use crate::semilinear::SemilinearOperator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SncError {
    #[error("invalid configuration JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("duplicate component id {0:?}")]
    DuplicateId(String),
    #[error("edge refers to undeclared component {0:?}")]
    UnknownComponent(String),
    #[error("self-intersection edge on component {0:?}")]
    Loop(String),
    #[error(
        "intersection point shared by {0} components (triple points are not normal crossings)"
    )]
    TripleIntersection(usize),
    #[error("edge must list exactly two components, got {0}")]
    MalformedEdge(usize),
    #[error("unknown component kind {0:?}")]
    UnknownKind(String),
    #[error("component {id:?}: {reason}")]
    BadComponentData { id: String, reason: String },
    #[error("component {id:?}: plane curve is not homogeneous of degree {degree}")]
    NotHomogeneous { id: String, degree: u32 },
    #[error("component {id:?}: plane curve vanishes modulo {p}")]
    VanishesModP { id: String, p: u64 },
    #[error("component {id:?}: explicit matrix is not square ({rows} rows)")]
    NotSquare { id: String, rows: usize },
    #[error("component {id:?}: {source}")]
    Hypersurface { id: String, source: LochomError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentKind {
    /// A smooth rational curve; `H^1 = 0`.
    Rational,
    /// A smooth plane curve given by a homogeneous ternary form.
    PlaneCurve { degree: u32, poly: IntegerPoly },
    /// Frobenius on `H^1` given directly, entries read modulo `p`.
    Explicit { matrix: Vec<Vec<i64>> },
}

impl ComponentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ComponentKind::Rational => "RATIONAL",
            ComponentKind::PlaneCurve { .. } => "PLANE_CURVE",
            ComponentKind::Explicit { .. } => "EXPLICIT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
}

impl Component {
    pub fn rational(id: impl Into<String>) -> Self {
        Component {
            id: id.into(),
            kind: ComponentKind::Rational,
        }
    }
}

/// Components as vertices, one edge per intersection point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(vertices: Vec<String>, edges: &[(String, String)]) -> Result<Self, SncError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(SncError::DuplicateId(v.clone()));
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| SncError::UnknownComponent(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| SncError::UnknownComponent(b.clone()))?;
            if ia == ib {
                return Err(SncError::Loop(a.clone()));
            }
            resolved.push((ia, ib));
        }
        Ok(DualGraph {
            vertices,
            edges: resolved,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Edges as pairs of vertex indices.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn connected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = self.vertices.len();
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
        count
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + self.connected_components() - self.vertices.len()
    }
}

pub fn betti1(g: &DualGraph) -> usize {
    g.betti1()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncConfig {
    prime: u64,
    components: Vec<Component>,
    graph: DualGraph,
}

impl SncConfig {
    pub fn new(
        prime: u64,
        components: Vec<Component>,
        edges: &[(String, String)],
    ) -> Result<Self, SncError> {
        FiniteField::prime(prime)?;
        let ids = components.iter().map(|c| c.id.clone()).collect();
        let graph = DualGraph::new(ids, edges)?;
        Ok(SncConfig {
            prime,
            components,
            graph,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    /// Parses the configuration JSON schema:
    /// `{"prime": p, "components": [{"id", "kind", "data"}], "edges": [[id, id], ...]}`.
    pub fn from_json(input: &str) -> Result<Self, SncError> {
        let raw: RawConfig =
            serde_json::from_str(input).map_err(|e| SncError::Json(e.to_string()))?;
        let mut components = Vec::with_capacity(raw.components.len());
        for c in raw.components {
            let id = c.id.into_string();
            let kind = parse_kind(&id, &c.kind, c.data)?;
            components.push(Component { id, kind });
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in raw.edges {
            match e.len() {
                2 => {
                    let mut it = e.into_iter().map(RawId::into_string);
                    edges.push((it.next().unwrap(), it.next().unwrap()));
                }
                n if n > 2 => return Err(SncError::TripleIntersection(n)),
                n => return Err(SncError::MalformedEdge(n)),
            }
        }
        SncConfig::new(raw.prime, components, &edges)
    }

    pub fn to_json(&self) -> String {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let data = match &c.kind {
                    ComponentKind::Rational => Value::Null,
                    ComponentKind::PlaneCurve { degree, poly } => {
                        serde_json::json!({ "degree": degree, "terms": poly.to_terms() })
                    }
                    ComponentKind::Explicit { matrix } => serde_json::json!({ "matrix": matrix }),
                };
                serde_json::json!({ "id": c.id, "kind": c.kind.label(), "data": data })
            })
            .collect();
        let edges: Vec<[&str; 2]> = self
            .graph
            .edges
            .iter()
            .map(|&(a, b)| {
                [
                    self.graph.vertices[a].as_str(),
                    self.graph.vertices[b].as_str(),
                ]
            })
            .collect();
        serde_json::json!({ "prime": self.prime, "components": components, "edges": edges })
            .to_string()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    prime: u64,
    components: Vec<RawComponent>,
    #[serde(default)]
    edges: Vec<Vec<RawId>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    id: RawId,
    kind: String,
    #[serde(default)]
    data: Option<Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawId {
    Text(String),
    Number(u64),
}

impl RawId {
    fn into_string(self) -> String {
        match self {
            RawId::Text(s) => s,
            RawId::Number(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneCurveData {
    degree: u32,
    terms: Vec<IntegerTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitData {
    matrix: Vec<Vec<i64>>,
}

fn parse_kind(id: &str, kind: &str, data: Option<Value>) -> Result<ComponentKind, SncError> {
    let bad = |reason: String| SncError::BadComponentData {
        id: id.to_string(),
        reason,
    };
    match kind {
        "RATIONAL" => match data {
            None | Some(Value::Null) => Ok(ComponentKind::Rational),
            Some(_) => Err(bad("rational components take no data".into())),
        },
        "PLANE_CURVE" => {
            let data = data.ok_or_else(|| bad("missing data".into()))?;
            let d: PlaneCurveData = serde_json::from_value(data).map_err(|e| bad(e.to_string()))?;
            let poly = IntegerPoly::new(3, &d.terms).map_err(|e: PolyError| bad(e.to_string()))?;
            Ok(ComponentKind::PlaneCurve {
                degree: d.degree,
                poly,
            })
        }
        "EXPLICIT" => {
            let data = data.ok_or_else(|| bad("missing data".into()))?;
            let d: ExplicitData = serde_json::from_value(data).map_err(|e| bad(e.to_string()))?;
            Ok(ComponentKind::Explicit { matrix: d.matrix })
        }
        other => Err(SncError::UnknownKind(other.to_string())),
    }
}

/// Frobenius on `H^1(Z_i, O_{Z_i})` for one component over `F_p`.
pub fn component_h1_frobenius(c: &Component, p: u64) -> Result<SemilinearOperator, SncError> {
    let k = FiniteField::prime(p)?;
    match &c.kind {
        ComponentKind::Rational => Ok(SemilinearOperator::zero(k, 0)),
        ComponentKind::PlaneCurve { .. } => Ok(plane_curve_cone(c, &k)?
            .frobenius_on_degree_zero()
            .map_err(|source| SncError::Hypersurface {
                id: c.id.clone(),
                source,
            })?),
        ComponentKind::Explicit { matrix } => {
            let n = matrix.len();
            if matrix.iter().any(|row| row.len() != n) {
                return Err(SncError::NotSquare {
                    id: c.id.clone(),
                    rows: n,
                });
            }
            let rows = matrix
                .iter()
                .map(|r| r.iter().map(|&x| k.from_int(x as i128)).collect())
                .collect();
            let m = Matrix::from_rows(rows).expect("rows checked square");
            Ok(SemilinearOperator::new(k, m).expect("entries reduced into the field"))
        }
    }
}

fn plane_curve_cone(c: &Component, k: &FiniteField) -> Result<HypersurfaceData, SncError> {
    let ComponentKind::PlaneCurve { degree, poly } = &c.kind else {
        unreachable!("called on plane curves only")
    };
    let unit = WeightSystem::standard(3);
    if poly.is_zero() || poly.is_quasi_homogeneous(&unit).ok().flatten() != Some(*degree as u64) {
        return Err(SncError::NotHomogeneous {
            id: c.id.clone(),
            degree: *degree,
        });
    }
    let f = poly.reduce_mod_p(k);
    if f.is_zero() {
        return Err(SncError::VanishesModP {
            id: c.id.clone(),
            p: k.characteristic(),
        });
    }
    HypersurfaceData::new(f, unit).map_err(|source| SncError::Hypersurface {
        id: c.id.clone(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub id: String,
    pub kind: &'static str,
    pub dim: usize,
    pub ss_dim: usize,
    pub nil_dim: usize,
    pub nilpotent: bool,
    /// Singular-point search on plane-curve components over `F_p`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<IsolatedCheck>,
}

/// Frobenius structure of `H^1(Z, O_Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Frobenius {
    pub betti1: usize,
    /// Stable classes coming from cycles of the dual graph (equals `betti1`).
    pub graph_part: usize,
    /// Stable classes coming from the components' own `H^1`.
    pub component_part: usize,
    pub ss_dim: usize,
    pub nil_dim: usize,
    pub per_component: Vec<ComponentReport>,
    /// Identity on the graph classes, block-diagonal on the components.
    pub operator: SemilinearOperator,
}

impl H1Frobenius {
    pub fn dim(&self) -> usize {
        self.ss_dim + self.nil_dim
    }
}

pub fn h1_frobenius(z: &SncConfig) -> Result<H1Frobenius, SncError> {
    let k = FiniteField::prime(z.prime)?;
    let mut ops = Vec::with_capacity(z.components.len());
    let mut per_component = Vec::with_capacity(z.components.len());
    for c in &z.components {
        let op = component_h1_frobenius(c, z.prime)?;
        let split = op.fitting_decomposition();
        let smoothness = match &c.kind {
            ComponentKind::PlaneCurve { .. } => Some(
                plane_curve_cone(c, &k)?
                    .isolated_check(1)
                    .unwrap_or(IsolatedCheck::Inconclusive { searched_degree: 0 }),
            ),
            _ => None,
        };
        per_component.push(ComponentReport {
            id: c.id.clone(),
            kind: c.kind.label(),
            dim: op.dim(),
            ss_dim: split.ss_dim,
            nil_dim: split.nil_dim,
            nilpotent: split.ss_dim == 0,
            smoothness,
        });
        ops.push(op);
    }
    let betti1 = z.graph.betti1();
    let graph_block = SemilinearOperator::identity(k.clone(), betti1);
    let components_op =
        SemilinearOperator::block_diagonal(k.clone(), &ops.iter().collect::<Vec<_>>());
    let component_split = components_op.fitting_decomposition();
    let operator = SemilinearOperator::block_diagonal(k, &[&graph_block, &components_op]);
    Ok(H1Frobenius {
        betti1,
        graph_part: betti1,
        component_part: component_split.ss_dim,
        ss_dim: betti1 + component_split.ss_dim,
        nil_dim: component_split.nil_dim,
        per_component,
        operator,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceVerdict {
    pub verdict: Verdict,
    pub prime: u64,
    pub betti1: usize,
    pub ss_dim: usize,
    pub nil_dim: usize,
    pub graph_part: usize,
    pub component_part: usize,
    pub per_component: Vec<ComponentReport>,
    pub warnings: Vec<String>,
}

pub fn classify_surface(z: &SncConfig) -> Result<SurfaceVerdict, SncError> {
    let h1 = h1_frobenius(z)?;
    let mut warnings = Vec::new();
    let pieces = z.graph.connected_components();
    if pieces > 1 {
        warnings.push(format!(
            "dual graph has {pieces} connected components; an exceptional fiber is connected"
        ));
    }
    let singular: BTreeSet<&str> = h1
        .per_component
        .iter()
        .filter(|r| matches!(r.smoothness, Some(IsolatedCheck::Fail { .. })))
        .map(|r| r.id.as_str())
        .collect();
    for id in singular {
        warnings.push(format!(
            "component {id:?} has a singular point over F_{}",
            z.prime
        ));
    }
    Ok(SurfaceVerdict {
        verdict: if h1.ss_dim == 0 {
            Verdict::FNilpotent
        } else {
            Verdict::NotFNilpotent
        },
        prime: z.prime,
        betti1: h1.betti1,
        ss_dim: h1.ss_dim,
        nil_dim: h1.nil_dim,
        graph_part: h1.graph_part,
        component_part: h1.component_part,
        per_component: h1.per_component,
        warnings,
    })
}
