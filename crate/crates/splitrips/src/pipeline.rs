//! Method dispatch: recognizes the structure of a metric, routes homology and
//! persistence queries to the fastest applicable method, and cross-checks any method
//! against the oracle.
//!
//! The automatic order is block decomposition, then the closed form for monotone
//! circular metrics, then the Mayer–Vietoris recursion for other circular metrics, then
//! the oracle.

use crate::block::{BlockPlan, GluingTree, detect_gluing_tree};
use crate::circular::{
    self, CircularDecomposition, RECOGNITION_CAP, alpha_from_metric, compute_m, compute_sigma,
    remove_degenerate_points,
};
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::homology::vr_betti;
use crate::io::to_json;
use crate::metric::DistanceMatrix;
use crate::mv::{DEFAULT_MAX_DEPTH, TraceNode, mv_homology};
use crate::number::{Rational, format_rational, int};
use crate::persistence::{Barcode, barcode_from_betti_curve, persistence};
use crate::split::{DEFAULT_SPLIT_CAP, enumerate_d_splits, is_weakly_compatible, residue};
use serde::Serialize;
use serde_json::{Value, json};

/// A homology method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Pick the fastest applicable method.
    Auto,
    /// Build the complex and reduce boundary matrices.
    Oracle,
    /// Closed form for monotone circular decomposable metrics.
    Circular,
    /// Mayer–Vietoris recursion for circular decomposable metrics.
    Mv,
    /// Direct sum over the augmented parts of a gluing tree.
    Block,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Method::Auto),
            "oracle" => Ok(Method::Oracle),
            "circular" => Ok(Method::Circular),
            "mv" => Ok(Method::Mv),
            "block" => Ok(Method::Block),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Auto => "auto",
            Method::Oracle => "oracle",
            Method::Circular => "circular",
            Method::Mv => "mv",
            Method::Block => "block",
        };
        f.write_str(s)
    }
}

/// What the dispatcher learned about a metric.
#[derive(Clone, Debug)]
pub struct Structure {
    /// The gluing tree (trivial when there is no cut).
    pub tree: GluingTree,
    /// A circular order and decomposition, when one exists and `n` is within the
    /// recognition cap.
    pub circular: Option<(Vec<usize>, CircularDecomposition)>,
    /// True when the circular decomposition is monotone after degenerate points are
    /// removed.
    pub monotone: bool,
}

/// Recognizes the gluing tree and any circular structure.
pub fn analyze(m: &DistanceMatrix) -> Result<Structure> {
    let tree = if m.n() >= 2 { detect_gluing_tree(m)? } else { GluingTree::trivial(m.n()) };
    let circular = if m.n() <= RECOGNITION_CAP { circular::recognize_circular(m)? } else { None };
    let monotone = match &circular {
        Some((_, cd)) => monotone_after_removal(cd)?,
        None => false,
    };
    Ok(Structure { tree, circular, monotone })
}

/// The star property on the metric left after degenerate points are removed.
pub fn monotone_after_removal(cd: &CircularDecomposition) -> Result<bool> {
    if cd.n() <= 3 {
        return Ok(true);
    }
    let red = remove_degenerate_points(&cd.positional_metric())?;
    let k = red.reduced.n();
    if k < 3 {
        return Ok(true);
    }
    let rcd = alpha_from_metric(&red.reduced, &(0..k).collect::<Vec<_>>())?;
    Ok(compute_m(&rcd, &compute_sigma(&rcd))?.star_holds)
}

/// Resolves `Auto` and checks that an explicit method fits the structure.
pub fn resolve(method: Method, s: &Structure) -> Result<Method> {
    let mismatch = |why: &str| Err(Error::MethodMismatch(format!("method {method} does not apply: {why}")));
    match method {
        Method::Auto => Ok(if !s.tree.is_trivial() {
            Method::Block
        } else if s.circular.is_some() && s.monotone {
            Method::Circular
        } else if s.circular.is_some() {
            Method::Mv
        } else {
            Method::Oracle
        }),
        Method::Circular if s.circular.is_none() => mismatch("the metric is not circular decomposable"),
        Method::Circular if !s.monotone => mismatch("the circular decomposition is not monotone"),
        Method::Mv if s.circular.is_none() => mismatch("the metric is not circular decomposable"),
        m => Ok(m),
    }
}

/// Betti numbers at one radius with method-specific detail.
#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    /// Method used.
    pub method: Method,
    /// Radius, as `"p/q"`.
    pub r: String,
    /// Betti numbers of `VR_r` in degrees `0..=maxdim`.
    pub betti: Vec<usize>,
    /// Mayer–Vietoris derivation trace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceNode>,
    /// Homotopy type from the closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homotopy: Option<String>,
    /// Block-level detail (part sizes, forest).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Value>,
}

/// A prepared metric answering repeated radius queries with one method.
pub struct Engine {
    method: Method,
    m: DistanceMatrix,
    field: FieldTag,
    maxdim: usize,
    plan: Option<BlockPlan>,
    circular: Option<(Vec<usize>, CircularDecomposition)>,
}

impl Engine {
    /// Analyzes `m` and resolves `method`.
    pub fn new(m: &DistanceMatrix, method: Method, field: FieldTag, maxdim: usize) -> Result<Self> {
        let s = analyze(m)?;
        let method = resolve(method, &s)?;
        let plan = (method == Method::Block).then(|| BlockPlan::with_tree(m, s.tree.clone()));
        Ok(Self { method, m: m.clone(), field, maxdim, plan, circular: s.circular })
    }

    /// The resolved method.
    pub fn method(&self) -> Method {
        self.method
    }

    /// The block plan, when the block method is in use.
    pub fn plan(&self) -> Option<&BlockPlan> {
        self.plan.as_ref()
    }

    /// Betti numbers of `VR_r` (open convention).
    pub fn betti(&self, r: &Rational) -> Result<BettiReport> {
        let mut rep = BettiReport {
            method: self.method,
            r: format_rational(r),
            betti: Vec::new(),
            trace: None,
            homotopy: None,
            blocks: None,
        };
        match self.method {
            Method::Oracle | Method::Auto => rep.betti = vr_betti(&self.m, r, self.maxdim, self.field),
            Method::Block => {
                let plan = self.plan.as_ref().expect("block plan");
                let h = plan.homology(r, self.field, self.maxdim);
                rep.betti = h.betti.clone();
                rep.blocks = Some(json!({
                    "part_sizes": plan.part_sizes(),
                    "part_betti": h.part_betti,
                    "closed_form": h.closed_form,
                    "forest": h.forest,
                }));
            }
            Method::Circular => {
                let (_, cd) = self.circular.as_ref().expect("circular decomposition");
                let h = circular::monotone_vr_homotopy(cd, r)?;
                rep.betti = h.homotopy.betti_numbers(self.maxdim);
                rep.homotopy = Some(h.homotopy.to_string());
            }
            Method::Mv => {
                let (order, _) = self.circular.as_ref().expect("circular decomposition");
                let res = mv_homology(&self.m.permute(order), r, self.field, self.maxdim, DEFAULT_MAX_DEPTH)?;
                rep.betti = res.betti;
                rep.trace = Some(res.trace);
            }
        }
        Ok(rep)
    }

    /// Persistence barcode. Circular and Mayer–Vietoris methods rebuild it from the
    /// Betti curve over all critical values.
    pub fn persistence(&self) -> Result<Barcode> {
        match self.method {
            Method::Oracle | Method::Auto => persistence(&self.m, self.maxdim, self.field),
            Method::Block => self.plan.as_ref().expect("block plan").persistence(self.maxdim, self.field),
            Method::Circular | Method::Mv => {
                let (values, curve) = self.closed_curve()?;
                Ok(barcode_from_betti_curve(self.field, &values, &curve))
            }
        }
    }

    /// Betti numbers of the closed complexes at `0` and at every distance.
    fn closed_curve(&self) -> Result<(Vec<Rational>, Vec<Vec<usize>>)> {
        let mut values = vec![Rational::default()];
        values.extend(self.m.distinct_values());
        let mut curve = Vec::with_capacity(values.len());
        for i in 0..values.len() {
            let r = values.get(i + 1).cloned().unwrap_or_else(|| &values[i] + int(1));
            curve.push(self.betti(&r)?.betti);
        }
        Ok((values, curve))
    }
}

/// Caps the worker pool used by the parallel parts of the crate. Call once, before
/// any computation.
pub fn set_worker_threads(jobs: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Error::Precondition(format!("cannot configure {jobs} worker threads: {e}")))
}

/// Radii of a sweep: every distance, then one radius past the diameter.
pub fn sweep_radii(m: &DistanceMatrix) -> Vec<Rational> {
    let mut radii = m.distinct_values();
    radii.push(m.diam() + int(1));
    radii
}

/// Compares `engine` with the oracle: barcodes for block and oracle methods, Betti
/// numbers at every sweep radius for the curve-based methods.
pub fn verify(engine: &Engine, m: &DistanceMatrix) -> Result<()> {
    match engine.method {
        Method::Circular | Method::Mv => {
            for r in sweep_radii(m) {
                let got = engine.betti(&r)?.betti;
                let want = vr_betti(m, &r, engine.maxdim, engine.field);
                if got != want {
                    return Err(Error::MethodMismatch(format!(
                        "{} gives {got:?} at r = {} but the oracle gives {want:?}",
                        engine.method,
                        format_rational(&r)
                    )));
                }
            }
            Ok(())
        }
        _ => {
            let got = engine.persistence()?;
            let want = persistence(m, engine.maxdim, engine.field)?;
            if got != want {
                return Err(Error::MethodMismatch(format!(
                    "{} barcode differs from the oracle barcode",
                    engine.method
                )));
            }
            Ok(())
        }
    }
}

/// The split decomposition report: d-splits with isolation indices, the residue and
/// the gluing tree.
pub fn decompose_report(m: &DistanceMatrix) -> Result<Value> {
    let sys = enumerate_d_splits(m, DEFAULT_SPLIT_CAP)?;
    let res = residue(m, &sys);
    let splits: Vec<Value> = sys
        .splits()
        .iter()
        .map(|(s, w)| {
            json!({
                "side": s.side_a().iter().map(|x| x + 1).collect::<Vec<_>>(),
                "other": s.side_b().iter().map(|x| x + 1).collect::<Vec<_>>(),
                "weight": format_rational(w),
            })
        })
        .collect();
    let tree = if m.n() >= 2 { Some(detect_gluing_tree(m)?) } else { None };
    Ok(json!({
        "n": m.n(),
        "splits": splits,
        "weakly_compatible": is_weakly_compatible(&sys),
        "residue": to_json(&res.d0)["d"],
        "totally_decomposable": res.is_zero(),
        "gluing_tree": tree,
    }))
}

/// The circular report: order, weights, `σ`, `M`, `M̄`, the star property and the
/// degenerate points. Positions and points are 1-based.
pub fn recognize_report(m: &DistanceMatrix, order: Option<&[usize]>) -> Result<Value> {
    let (order, cd) = match order {
        Some(o) => (o.to_vec(), alpha_from_metric(m, o)?),
        None => circular::recognize_circular(m)?
            .ok_or_else(|| Error::NotCircular("no cyclic order admits a nonnegative circular decomposition".into()))?,
    };
    let n = cd.n();
    let sigma = compute_sigma(&cd);
    let cert = if sigma.undefined.is_empty() { compute_m(&cd, &sigma).ok() } else { None };
    let removal = if n > 2 { Some(remove_degenerate_points(&cd.positional_metric())?) } else { None };
    let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    Ok(json!({
        "n": n,
        "order": one(&order),
        "alpha": cd.alpha.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "sigma": sigma.sigma.iter().map(|s| s.map(|x| x + 1)).collect::<Vec<_>>(),
        "m": cert.as_ref().map(|c| one(&c.m)),
        "mbar": cert.as_ref().map(|c| one(&c.mbar)),
        "star": cert.as_ref().map(|c| c.star_holds),
        "monotone": monotone_after_removal(&cd)?,
        "degenerate": removal.map(|r| r.removals.iter().map(|rm| json!({
            "position": rm.point + 1,
            "point": order[rm.point] + 1,
            "threshold": format_rational(&rm.threshold),
        })).collect::<Vec<_>>()).unwrap_or_default(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::wedge;
    use crate::fixtures;

    #[test]
    fn auto_dispatch() {
        let pick = |m: &DistanceMatrix| resolve(Method::Auto, &analyze(m).unwrap()).unwrap();
        assert_eq!(pick(&fixtures::hexagon()), Method::Circular);
        assert_eq!(pick(&fixtures::seven_point()), Method::Mv);
        assert_eq!(pick(&fixtures::k23()), Method::Oracle);
        let h = fixtures::hexagon();
        assert_eq!(pick(&wedge(&h, 0, &h, 0)), Method::Block);
    }

    #[test]
    fn explicit_mismatch() {
        let s = analyze(&fixtures::seven_point()).unwrap();
        assert!(matches!(resolve(Method::Circular, &s), Err(Error::MethodMismatch(_))));
        let s = analyze(&fixtures::k23()).unwrap();
        assert_eq!(resolve(Method::Mv, &s).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn every_method_verifies_on_fixtures() {
        for (m, method) in [
            (fixtures::hexagon(), Method::Circular),
            (fixtures::hexagon(), Method::Mv),
            (fixtures::seven_point(), Method::Mv),
            (fixtures::circle_five_points(), Method::Circular),
            (fixtures::k23(), Method::Oracle),
            (fixtures::hexagon(), Method::Block),
        ] {
            let e = Engine::new(&m, method, FieldTag::Q, 3).unwrap();
            verify(&e, &m).unwrap();
        }
    }

    #[test]
    fn hexagon_circular_barcode_matches_oracle() {
        let m = fixtures::hexagon();
        let e = Engine::new(&m, Method::Circular, FieldTag::Q, 2).unwrap();
        assert_eq!(e.persistence().unwrap(), persistence(&m, 2, FieldTag::Q).unwrap());
    }

    #[test]
    fn reports() {
        let d = decompose_report(&fixtures::k23()).unwrap();
        assert_eq!(d["splits"].as_array().unwrap().len(), 0);
        assert_eq!(d["totally_decomposable"], json!(false));
        let r = recognize_report(&fixtures::hexagon(), None).unwrap();
        assert_eq!(r["monotone"], json!(true));
        let r = recognize_report(&fixtures::seven_point(), Some(&(0..7).collect::<Vec<_>>())).unwrap();
        assert_eq!(r["monotone"], json!(false));
        assert_eq!(recognize_report(&fixtures::k23(), None).unwrap_err().exit_code(), 3);
    }
}
