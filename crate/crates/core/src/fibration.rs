//! Intersection arithmetic on configurations of curves on a K3 surface:
//! fiber classes, affine Dynkin types with their marks, sections, and the
//! degree of the pencil sum F + F′.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{int, IntMatrix};
use crate::normal_form::smith_normal_form;

const SHIPPED_GRAPH: &str = include_str!("../data/curve_graph.json");
const SHIPPED_FIBERS: [&str; 4] = [
    include_str!("../data/F1.json"),
    include_str!("../data/F2.json"),
    include_str!("../data/F1p.json"),
    include_str!("../data/F2p.json"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    #[serde(rename = "self")]
    pub self_intersection: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGraph {
    pub curves: Vec<Curve>,
    /// `(a, b, multiplicity)`.
    pub edges: Vec<(String, String, i64)>,
    /// Edges not pinned down by the incidence data; they reproduce the
    /// intersection numbers but the configuration is not unique.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provisional: Vec<(String, String)>,
}

impl CurveGraph {
    pub fn new(curves: Vec<Curve>, edges: Vec<(String, String, i64)>) -> Result<Self> {
        let g = CurveGraph {
            curves,
            edges,
            provisional: Vec::new(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Smooth rational curves, all of self-intersection −2.
    pub fn rational(names: &[&str], edges: &[(&str, &str, i64)]) -> Result<Self> {
        Self::new(
            names
                .iter()
                .map(|n| Curve {
                    name: n.to_string(),
                    self_intersection: -2,
                })
                .collect(),
            edges.iter().map(|(a, b, m)| (a.to_string(), b.to_string(), *m)).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.curves {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::MalformedGraph(format!("duplicate curve {}", c.name)));
            }
        }
        let mut pairs = BTreeSet::new();
        for (a, b, m) in &self.edges {
            self.index(a)?;
            self.index(b)?;
            if a == b {
                return Err(Error::MalformedGraph(format!("self-edge on {a}")));
            }
            if *m < 1 {
                return Err(Error::MalformedGraph(format!("edge {a}-{b} has multiplicity {m}")));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !pairs.insert(key) {
                return Err(Error::MalformedGraph(format!("edge {a}-{b} listed twice")));
            }
        }
        for (a, b) in &self.provisional {
            if !self.edges.iter().any(|(x, y, _)| (x == a && y == b) || (x == b && y == a)) {
                return Err(Error::MalformedGraph(format!("provisional edge {a}-{b} is not an edge")));
            }
        }
        Ok(())
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.curves.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.curves.len();
        let mut m = IntMatrix::empty(n, n);
        for (i, c) in self.curves.iter().enumerate() {
            m[(i, i)] = int(c.self_intersection);
        }
        for (a, b, mult) in &self.edges {
            let (i, j) = (self.index(a).unwrap(), self.index(b).unwrap());
            m[(i, j)] = int(*mult);
            m[(j, i)] = int(*mult);
        }
        m
    }

    /// Intersection number of two curves.
    pub fn meet(&self, a: &str, b: &str) -> Result<i64> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        if i == j {
            return Ok(self.curves[i].self_intersection);
        }
        Ok(self
            .edges
            .iter()
            .find(|(x, y, _)| (x == a && y == b) || (x == b && y == a))
            .map_or(0, |e| e.2))
    }

    fn vector(&self, d: &DivisorClass) -> Result<Vec<i64>> {
        let mut v = vec![0; self.curves.len()];
        for (name, c) in &d.coeffs {
            v[self.index(name)?] += c;
        }
        Ok(v)
    }

    /// D₁ · D₂.
    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
        let (x, y) = (self.vector(d1)?, self.vector(d2)?);
        let m = self.intersection_matrix();
        let mut s = 0i64;
        for i in 0..x.len() {
            for j in 0..y.len() {
                if x[i] != 0 && y[j] != 0 {
                    s += x[i] * m[(i, j)].to_i64().unwrap() * y[j];
                }
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("graph serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let g: CurveGraph = serde_json::from_value(v.clone())?;
        g.validate()?;
        Ok(g)
    }

    /// The configuration of rational curves on the genus-2 K3 surface
    /// with its two elliptic fibrations.
    pub fn shipped() -> Self {
        let v: Value = serde_json::from_str(SHIPPED_GRAPH).expect("shipped graph parses");
        CurveGraph::from_json(&v).expect("shipped graph is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    #[serde(default)]
    pub name: String,
    pub coeffs: BTreeMap<String, i64>,
    /// Fiber type claimed for this class, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated_type: Option<String>,
}

impl DivisorClass {
    pub fn new(name: &str, coeffs: &[(&str, i64)]) -> Self {
        DivisorClass {
            name: name.to_string(),
            coeffs: coeffs.iter().map(|(c, k)| (c.to_string(), *k)).collect(),
            stated_type: None,
        }
    }

    pub fn curve(name: &str) -> Self {
        Self::new(name, &[(name, 1)])
    }

    /// Curves with nonzero coefficient.
    pub fn support(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .filter(|(_, c)| **c != 0)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(serde_json::from_value(v.clone())?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("divisor serializes")
    }

    /// F₁, F₂, F₁′, F₂′ on [`CurveGraph::shipped`].
    pub fn shipped_fibers() -> Vec<DivisorClass> {
        SHIPPED_FIBERS
            .iter()
            .map(|s| serde_json::from_str(s).expect("shipped divisor parses"))
            .collect()
    }

    pub fn shipped_fiber(name: &str) -> Result<DivisorClass> {
        Self::shipped_fibers()
            .into_iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no shipped fiber {name}")))
    }
}

/// D² = 0 and D · C = 0 for every component C of D.
pub fn fiber_class_check(g: &CurveGraph, d: &DivisorClass) -> Result<bool> {
    if g.intersect(d, d)? != 0 {
        return Ok(false);
    }
    for c in d.support() {
        if g.intersect(d, &DivisorClass::curve(&c))? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// S · F = 1.
pub fn section_check(g: &CurveGraph, s: &str, f: &DivisorClass) -> Result<bool> {
    g.index(s)?;
    Ok(g.intersect(&DivisorClass::curve(s), f)? == 1)
}

/// (F + F′)².
pub fn pencil_degree(g: &CurveGraph, f: &DivisorClass, f2: &DivisorClass) -> Result<i64> {
    let mut sum = f.coeffs.clone();
    for (c, k) in &f2.coeffs {
        *sum.entry(c.clone()).or_insert(0) += k;
    }
    let s = DivisorClass {
        name: format!("{}+{}", f.name, f2.name),
        coeffs: sum,
        stated_type: None,
    };
    g.intersect(&s, &s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AffineType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A(n) => write!(f, "~A{n}"),
            AffineType::D(n) => write!(f, "~D{n}"),
            AffineType::E6 => f.write_str("~E6"),
            AffineType::E7 => f.write_str("~E7"),
            AffineType::E8 => f.write_str("~E8"),
        }
    }
}

impl AffineType {
    /// Multigraph adjacency of the affine diagram.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let nodes = match *self {
            AffineType::A(1) => {
                return vec![vec![0, 2], vec![2, 0]];
            }
            AffineType::A(n) => {
                edges.extend((0..=n).map(|i| (i, (i + 1) % (n + 1))));
                n + 1
            }
            AffineType::D(n) => {
                // chain 0..=n-2 with extra leaves on nodes 1 and n-3
                edges.extend((0..n - 2).map(|i| (i, i + 1)));
                edges.push((n - 1, 1));
                edges.push((n, n - 3));
                n + 1
            }
            AffineType::E6 => star(&[2, 2, 2], &mut edges),
            AffineType::E7 => star(&[1, 3, 3], &mut edges),
            AffineType::E8 => star(&[1, 2, 5], &mut edges),
        };
        let mut adj = vec![vec![0; nodes]; nodes];
        for (a, b) in edges {
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
        adj
    }

    /// Diagrams with `nodes` vertices.
    pub fn candidates(nodes: usize) -> Vec<AffineType> {
        let mut out = Vec::new();
        if nodes >= 2 {
            out.push(AffineType::A(nodes - 1));
        }
        if nodes >= 5 {
            out.push(AffineType::D(nodes - 1));
        }
        match nodes {
            7 => out.push(AffineType::E6),
            8 => out.push(AffineType::E7),
            9 => out.push(AffineType::E8),
            _ => {}
        }
        out
    }
}

/// Node 0 is the centre; arms are paths of the given lengths.
fn star(arms: &[usize], edges: &mut Vec<(usize, usize)>) -> usize {
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    next
}

fn isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let deg = |m: &[Vec<i64>], i: usize| m[i].iter().sum::<i64>();
    let mut da: Vec<i64> = (0..n).map(|i| deg(a, i)).collect();
    let mut db: Vec<i64> = (0..n).map(|i| deg(b, i)).collect();
    let (sa, sb) = (da.clone(), db.clone());
    da.sort();
    db.sort();
    if da != db {
        return false;
    }
    fn go(a: &[Vec<i64>], b: &[Vec<i64>], sa: &[i64], sb: &[i64], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            if (0..i).all(|k| a[i][k] == b[j][map[k]]) {
                used[j] = true;
                map.push(j);
                if go(a, b, sa, sb, map, used) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    go(a, b, &sa, &sb, &mut Vec::new(), &mut vec![false; n])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinVerdict {
    /// `~A{n}`, `~D{n}`, `~E6`, `~E7`, `~E8` or `NONE`.
    pub type_name: String,
    /// Primitive positive kernel vector of the component matrix.
    pub marks: BTreeMap<String, i64>,
}

impl DynkinVerdict {
    pub fn none() -> Self {
        DynkinVerdict {
            type_name: "NONE".into(),
            marks: BTreeMap::new(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.type_name == "NONE"
    }
}

/// Integer kernel of a square matrix, as a Z-basis.
fn integer_kernel(m: &IntMatrix) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(m);
    (0..m.cols())
        .filter(|&j| j >= snf.divisors.len() || snf.divisors[j].is_zero())
        .map(|j| snf.v.column(j).iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

/// Matches the configuration of `components` against the affine diagrams.
pub fn dynkin_type(g: &CurveGraph, components: &[String]) -> Result<DynkinVerdict> {
    let idx: Vec<usize> = components.iter().map(|c| g.index(c)).collect::<Result<_>>()?;
    if idx.is_empty() {
        return Err(Error::InvalidArgument("no components".into()));
    }
    for (&i, c) in idx.iter().zip(components) {
        if g.curves[i].self_intersection != -2 {
            return Err(Error::InvalidArgument(format!("{c} is not a (−2)-curve")));
        }
    }
    let full = g.intersection_matrix();
    let sub = full.select(&idx, &idx);
    let adj: Vec<Vec<i64>> = (0..idx.len())
        .map(|i| {
            (0..idx.len())
                .map(|j| if i == j { 0 } else { sub[(i, j)].to_i64().unwrap() })
                .collect()
        })
        .collect();
    // connectivity
    let mut reached = vec![false; idx.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..idx.len() {
            if adj[i][j] != 0 && !reached[j] {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(Error::Disconnected);
    }
    let Some(t) = AffineType::candidates(idx.len())
        .into_iter()
        .find(|t| isomorphic(&adj, &t.adjacency()))
    else {
        return Ok(DynkinVerdict::none());
    };
    let kernel = integer_kernel(&sub);
    if kernel.len() != 1 {
        return Err(Error::Verification(format!("{t} configuration has corank {}", kernel.len())));
    }
    let mut v = kernel.into_iter().next().unwrap();
    if v.iter().any(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x <= 0) {
        return Err(Error::Verification(format!("{t} kernel vector is not positive")));
    }
    Ok(DynkinVerdict {
        type_name: t.to_string(),
        marks: components.iter().cloned().zip(v).collect(),
    })
}

/// Everything computed about one claimed fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub fiber: String,
    pub stated_type: Option<String>,
    pub is_fiber: bool,
    pub dynkin: DynkinVerdict,
    /// Coefficients equal the marks of the computed type.
    pub marks_match: bool,
    /// Stated and computed types disagree.
    pub discrepancy: bool,
}

pub fn fiber_report(g: &CurveGraph, d: &DivisorClass) -> Result<FiberReport> {
    let is_fiber = fiber_class_check(g, d)?;
    let dynkin = dynkin_type(g, &d.support())?;
    let marks_match = !dynkin.is_none()
        && dynkin.marks.iter().all(|(c, m)| d.coeffs.get(c) == Some(m));
    let discrepancy = d.stated_type.as_ref().is_some_and(|s| *s != dynkin.type_name);
    Ok(FiberReport {
        fiber: d.name.clone(),
        stated_type: d.stated_type.clone(),
        is_fiber,
        dynkin,
        marks_match,
        discrepancy,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceCheck {
    pub curve: String,
    pub fiber: String,
    pub value: i64,
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub fibers: Vec<FiberReport>,
    pub incidences: Vec<IncidenceCheck>,
    pub pencil_degree: i64,
    pub same_pencil: Vec<(String, String, i64)>,
    pub provisional_edges: Vec<(String, String)>,
}

impl ConfigurationReport {
    /// True when every fiber checks, every incidence holds and the pencil
    /// has degree 4. Type discrepancies are reported, not failed.
    pub fn arithmetic_holds(&self) -> bool {
        self.fibers.iter().all(|f| f.is_fiber && f.marks_match)
            && self.incidences.iter().all(|c| c.value == c.expected)
            && self.pencil_degree == 4
            && self.same_pencil.iter().all(|p| p.2 == 0)
    }
}

/// Runs every check on the shipped configuration.
pub fn configuration_report(g: &CurveGraph) -> Result<ConfigurationReport> {
    let fibers = DivisorClass::shipped_fibers();
    let by_name = |n: &str| fibers.iter().find(|f| f.name == n).unwrap();
    let reports = fibers.iter().map(|f| fiber_report(g, f)).collect::<Result<Vec<_>>>()?;
    let mut incidences = Vec::new();
    for (curve, fiber, expected) in [
        ("S", "F1", 1),
        ("S", "F2", 1),
        ("R7", "F1'", 1),
        ("R7", "F2'", 1),
        ("R0", "F1", 0),
        ("W", "F1", 3),
        ("W", "F1'", 3),
    ] {
        incidences.push(IncidenceCheck {
            curve: curve.into(),
            fiber: fiber.into(),
            value: g.intersect(&DivisorClass::curve(curve), by_name(fiber))?,
            expected,
        });
    }
    for w in ["R0", "N0", "N7"] {
        incidences.push(IncidenceCheck {
            curve: "W".into(),
            fiber: w.into(),
            value: g.meet("W", w)?,
            expected: 1,
        });
    }
    let same_pencil = [("F1", "F2"), ("F1'", "F2'")]
        .iter()
        .map(|(a, b)| Ok((a.to_string(), b.to_string(), g.intersect(by_name(a), by_name(b))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfigurationReport {
        fibers: reports,
        incidences,
        pencil_degree: pencil_degree(g, by_name("F1"), by_name("F1'"))?,
        same_pencil,
        provisional_edges: g.provisional.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_disjoint_curves() {
        let g = CurveGraph::rational(&["a", "b"], &[]).unwrap();
        assert_eq!(g.intersection_matrix(), crate::matrix::int_matrix(&[&[-2, 0], &[0, -2]]));
        assert!(!fiber_class_check(&g, &DivisorClass::curve("a")).unwrap());
    }

    #[test]
    fn malformed_graphs() {
        assert!(CurveGraph::rational(&["a"], &[("a", "a", 1)]).is_err());
        assert!(CurveGraph::rational(&["a", "b"], &[("a", "b", 0)]).is_err());
        assert!(CurveGraph::rational(&["a"], &[("a", "c", 1)]).is_err());
        assert!(CurveGraph::rational(&["a", "a"], &[]).is_err());
    }

    #[test]
    fn triangle_is_a2() {
        let g = CurveGraph::rational(&["x", "y", "z"], &[("x", "y", 1), ("y", "z", 1), ("z", "x", 1)]).unwrap();
        let v = dynkin_type(&g, &strings(&["x", "y", "z"])).unwrap();
        assert_eq!(v.type_name, "~A2");
        assert!(v.marks.values().all(|&m| m == 1));
        let a1 = CurveGraph::rational(&["x", "y"], &[("x", "y", 2)]).unwrap();
        assert_eq!(dynkin_type(&a1, &strings(&["x", "y"])).unwrap().type_name, "~A1");
    }

    #[test]
    fn d4_and_none() {
        let g = CurveGraph::rational(
            &["c", "a", "b", "d", "e"],
            &[("c", "a", 1), ("c", "b", 1), ("c", "d", 1), ("c", "e", 1)],
        )
        .unwrap();
        let v = dynkin_type(&g, &strings(&["c", "a", "b", "d", "e"])).unwrap();
        assert_eq!(v.type_name, "~D4");
        assert_eq!(v.marks["c"], 2);
        // a finite A3 chain is not affine
        let chain = CurveGraph::rational(&["a", "b", "c"], &[("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert!(dynkin_type(&chain, &strings(&["a", "b", "c"])).unwrap().is_none());
        let apart = CurveGraph::rational(&["a", "b"], &[]).unwrap();
        assert_eq!(dynkin_type(&apart, &strings(&["a", "b"])), Err(Error::Disconnected));
    }

    #[test]
    fn templates_have_corank_one() {
        for t in [
            AffineType::A(1),
            AffineType::A(4),
            AffineType::D(4),
            AffineType::D(7),
            AffineType::E6,
            AffineType::E7,
            AffineType::E8,
        ] {
            let adj = t.adjacency();
            let n = adj.len();
            let m = IntMatrix::from_fn(n, n, |i, j| if i == j { int(-2) } else { int(adj[i][j]) });
            assert_eq!(m.rank(), n - 1, "{t}");
        }
    }

    #[test]
    fn shipped_fibers() {
        let g = CurveGraph::shipped();
        let r = configuration_report(&g).unwrap();
        let types: Vec<&str> = r.fibers.iter().map(|f| f.dynkin.type_name.as_str()).collect();
        assert_eq!(types, vec!["~E8", "~E7", "~E8", "~E7"]);
        assert!(r.fibers.iter().all(|f| f.is_fiber && f.marks_match));
        assert_eq!(r.fibers.iter().map(|f| f.discrepancy).collect::<Vec<_>>(), vec![false, false, false, true]);
        assert_eq!(r.pencil_degree, 4);
        assert!(r.arithmetic_holds());
    }

    #[test]
    fn shipped_specifics() {
        let g = CurveGraph::shipped();
        let f1 = DivisorClass::shipped_fiber("F1").unwrap();
        let f2 = DivisorClass::shipped_fiber("F2").unwrap();
        let f1p = DivisorClass::shipped_fiber("F1'").unwrap();
        assert!(section_check(&g, "S", &f1).unwrap());
        assert!(section_check(&g, "R7", &f1p).unwrap());
        assert!(!section_check(&g, "R0", &f1).unwrap());
        assert_eq!(pencil_degree(&g, &f1, &f1).unwrap(), 0);
        assert_eq!(g.intersect(&f1, &f2).unwrap(), 0);
        for c in ["R0", "N0", "N7"] {
            assert_eq!(g.meet("W", c).unwrap(), 1);
        }
        let mut marks: Vec<i64> = dynkin_type(&g, &f1.support()).unwrap().marks.into_values().collect();
        marks.sort();
        assert_eq!(marks, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn fixed_curves_are_disjoint() {
        let g = CurveGraph::shipped();
        let fixed = ["R1", "R3", "R5", "R7", "N2", "N4", "N6", "S", "W"];
        for a in fixed {
            for b in fixed {
                if a != b {
                    assert_eq!(g.meet(a, b).unwrap(), 0, "{a}·{b}");
                }
            }
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let g = CurveGraph::shipped();
        assert_eq!(CurveGraph::from_json(&g.to_json()).unwrap(), g);
        let d = DivisorClass::shipped_fiber("F2'").unwrap();
        assert_eq!(DivisorClass::from_json(&d.to_json()).unwrap(), d);
    }
}
