//! Inverse systems of finite modules over Z/p^M and their limits.
//!
//! A tower is materialized on a finite window of stages. Image chains
//! `im(X_{n+k} → X_n)` must be constant over the second half of their range
//! for every stage in the lower half of the window; otherwise the tower is
//! reported as not stabilizing. On the stable images all transition maps are
//! surjective, and over the last quarter of the checked range they must be
//! isomorphisms. The truncated `1 - shift` has kernel `lim` and cokernel `lim¹`.

use crate::error::{Error, Result};
use crate::group::{AbelianPGroup, Hom, Module, Submodule, ZpMatrix};

#[derive(Clone, Debug)]
pub struct Tower {
    p: u64,
    prec: u32,
    stages: Vec<Module>,
    /// `maps[n]: stages[n+1] → stages[n]`.
    maps: Vec<ZpMatrix>,
}

#[derive(Clone, Debug)]
pub struct LimResult {
    pub lim: AbelianPGroup,
    pub lim1: AbelianPGroup,
    /// Every image chain in the checked range is eventually constant.
    pub mittag_leffler: bool,
    /// Stable image of the top checked stage, carrying `lim`.
    pub stable: Submodule,
    pub stable_stage: usize,
}

impl Tower {
    pub fn new(stages: Vec<Module>, maps: Vec<ZpMatrix>) -> Result<Self> {
        let first = stages
            .first()
            .ok_or_else(|| Error::invalid("tower needs at least one stage"))?;
        let (p, prec) = (first.p(), first.precision());
        if maps.len() + 1 != stages.len() {
            return Err(Error::invalid("a tower with k stages needs k-1 maps"));
        }
        for (n, f) in maps.iter().enumerate() {
            if stages[n].p() != p || stages[n + 1].precision() != prec {
                return Err(Error::invalid("stages over different rings"));
            }
            Hom::new(stages[n + 1].clone(), stages[n].clone(), f.clone())
                .map_err(|e| Error::invalid(format!("transition {}: {e}", n + 1)))?;
        }
        Ok(Tower {
            p,
            prec,
            stages,
            maps,
        })
    }

    /// Stages `0..len`; `f(n)` gives stage `n` and, for `n > 0`, the map to stage `n - 1`.
    pub fn from_fn<F>(len: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize) -> (Module, ZpMatrix),
    {
        let mut stages = Vec::with_capacity(len);
        let mut maps = Vec::with_capacity(len.saturating_sub(1));
        for n in 0..len {
            let (m, g) = f(n);
            stages.push(m);
            if n > 0 {
                maps.push(g);
            }
        }
        Tower::new(stages, maps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stage(&self, n: usize) -> &Module {
        &self.stages[n]
    }

    pub fn map(&self, n: usize) -> Hom {
        Hom {
            source: self.stages[n + 1].clone(),
            target: self.stages[n].clone(),
            matrix: self.maps[n].clone(),
        }
    }

    /// Default window: four stages per digit of precision.
    pub fn default_window(prec: u32) -> usize {
        4 * prec as usize
    }

    /// Stable image at stage n, or `None` if the chain is still moving late in the window.
    fn stable_image(&self, n: usize) -> Option<Submodule> {
        let last = self.stages.len() - 1;
        let span = last - n;
        let settle = span - span / 2;
        let mut comp = ZpMatrix::identity(self.p, self.prec, self.stages[n].gens());
        let mut orders = Vec::with_capacity(span + 1);
        let mut settled = None;
        for k in 0..=span {
            if k > 0 {
                comp = comp.mul(&self.maps[n + k - 1]);
            }
            let img = self.stages[n].submodule(&comp);
            orders.push(img.module.log_order());
            if k == settle {
                settled = Some(img);
            }
        }
        let tail = &orders[settle..];
        tail.windows(2).all(|w| w[0] == w[1]).then_some(settled).flatten()
    }
}

/// Coordinates `c` with `G c = y` in `ambient`, where `G` generates a submodule.
pub fn solve_in(ambient: &Module, gens: &ZpMatrix, y: &[u64]) -> Option<Vec<u64>> {
    let (p, prec) = (ambient.p(), ambient.precision());
    let col = ZpMatrix::from_columns(p, prec, ambient.gens(), &[y.to_vec()]);
    let system = gens.hconcat(ambient.relations()).hconcat(&col);
    let ker = system.kernel();
    let last = system.cols() - 1;
    let modulus = system.modulus();
    (0..ker.cols()).find_map(|j| {
        let lead = ker.get(last, j);
        let inv = crate::arith::inv_mod(lead, modulus).filter(|_| lead % p != 0)?;
        Some(
            (0..gens.cols())
                .map(|r| {
                    let x = crate::arith::mul_mod(ker.get(r, j), inv, modulus);
                    (modulus - x) % modulus
                })
                .collect(),
        )
    })
}

/// Block-diagonal direct sum of modules over the same ring.
pub fn direct_sum(p: u64, prec: u32, parts: &[Module]) -> Module {
    let rows: usize = parts.iter().map(Module::gens).sum();
    let cols: usize = parts.iter().map(|m| m.relations().cols()).sum();
    let mut r = ZpMatrix::zeros(p, prec, rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in parts {
        let rel = m.relations();
        for i in 0..rel.rows() {
            for j in 0..rel.cols() {
                r.set(r0 + i, c0 + j, rel.get(i, j));
            }
        }
        r0 += rel.rows();
        c0 += rel.cols();
    }
    Module::new(r)
}

/// `lim` and `lim¹` of the tower at its precision.
pub fn lim_tower(t: &Tower) -> Result<LimResult> {
    let window = t.len();
    if window < 2 {
        return Err(Error::NoStabilization { window });
    }
    let top = (window - 1) / 2;
    let images = (0..=top)
        .map(|n| t.stable_image(n))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NoStabilization { window })?;
    let (p, prec) = (t.p, t.prec);
    let modulus = p.pow(prec);
    // restricted transitions I_{n+1} → I_n
    let mut restricted = Vec::with_capacity(top);
    for n in 0..top {
        let src = &images[n + 1];
        let pushed = t.maps[n].mul(&src.inclusion);
        let cols = (0..pushed.cols())
            .map(|j| solve_in(&t.stages[n], &images[n].inclusion, &pushed.column(j)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Precondition("stable images are not compatible".into()))?;
        let m = ZpMatrix::from_columns(p, prec, images[n].module.gens(), &cols);
        restricted.push(Hom::new(src.module.clone(), images[n].module.clone(), m)?);
    }
    if restricted[(3 * top) / 4..].iter().any(|h| !h.is_iso()) {
        return Err(Error::NoStabilization { window });
    }
    let src_parts: Vec<Module> = images.iter().map(|s| s.module.clone()).collect();
    let tgt_parts = &src_parts[..top];
    let src = direct_sum(p, prec, &src_parts);
    let tgt = direct_sum(p, prec, tgt_parts);
    let offsets = |parts: &[Module]| -> Vec<usize> {
        parts
            .iter()
            .scan(0, |acc, m| {
                let o = *acc;
                *acc += m.gens();
                Some(o)
            })
            .collect()
    };
    let (so, to) = (offsets(&src_parts), offsets(tgt_parts));
    let mut mat = ZpMatrix::zeros(p, prec, tgt.gens(), src.gens());
    for n in 0..top {
        for k in 0..src_parts[n].gens() {
            mat.set(to[n] + k, so[n] + k, 1);
        }
        let f = &restricted[n].matrix;
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                let x = f.get(i, j);
                mat.set(to[n] + i, so[n + 1] + j, (modulus - x) % modulus);
            }
        }
    }
    let shift = Hom::new(src, tgt, mat)?;
    let stable = images[top].clone();
    Ok(LimResult {
        lim: shift.kernel().module.structure(),
        lim1: shift.cokernel().structure(),
        mittag_leffler: true,
        stable,
        stable_stage: top,
    })
}

/// Levelwise maps `X_n → Y_n` commuting with the transitions.
#[derive(Clone, Debug)]
pub struct TowerMap {
    pub levels: Vec<ZpMatrix>,
}

impl TowerMap {
    pub fn new(src: &Tower, tgt: &Tower, levels: Vec<ZpMatrix>) -> Result<Self> {
        if levels.len() != src.len() || src.len() != tgt.len() {
            return Err(Error::invalid("tower map needs one matrix per stage"));
        }
        for (n, f) in levels.iter().enumerate() {
            Hom::new(src.stages[n].clone(), tgt.stages[n].clone(), f.clone())?;
            if n + 1 < levels.len() {
                let left = f.mul(&src.maps[n]);
                let right = tgt.maps[n].mul(&levels[n + 1]);
                let stage = &tgt.stages[n];
                let commutes = (0..left.cols()).all(|j| {
                    let diff: Vec<u64> = left
                        .column(j)
                        .iter()
                        .zip(right.column(j))
                        .map(|(a, b)| (a + left.modulus() - b) % left.modulus())
                        .collect();
                    stage.is_zero_element(&diff)
                });
                if !commutes {
                    return Err(Error::invalid(format!("tower map does not commute at stage {n}")));
                }
            }
        }
        Ok(TowerMap { levels })
    }

    /// The map on limits, through the stable images that carry them.
    pub fn on_limits(&self, tgt: &Tower, ls: &LimResult, lt: &LimResult) -> Result<Hom> {
        if ls.stable_stage != lt.stable_stage {
            return Err(Error::invalid("limits computed on different windows"));
        }
        let k = ls.stable_stage;
        let pushed = self.levels[k].mul(&ls.stable.inclusion);
        let cols = (0..pushed.cols())
            .map(|j| solve_in(tgt.stage(k), &lt.stable.inclusion, &pushed.column(j)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Precondition("image leaves the stable image".into()))?;
        Hom::new(
            ls.stable.module.clone(),
            lt.stable.module.clone(),
            ZpMatrix::from_columns(tgt.p, tgt.prec, lt.stable.module.gens(), &cols),
        )
    }
}

/// Orders and exactness of `0 → lim A → lim B → lim C → lim¹ A → lim¹ B → lim¹ C → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorReport {
    pub lim_orders: [u64; 3],
    pub lim1_orders: [u64; 3],
    pub exact: bool,
}

/// Exactness for a levelwise short exact sequence `A → B → C` of towers.
pub fn milnor_check(a: &Tower, b: &Tower, c: &Tower, f: &TowerMap, g: &TowerMap) -> Result<MilnorReport> {
    let (la, lb, lc) = (lim_tower(a)?, lim_tower(b)?, lim_tower(c)?);
    let lf = f.on_limits(b, &la, &lb)?;
    let lg = g.on_limits(c, &lb, &lc)?;
    let comp = lf.compose(&lg);
    let composite_zero = (0..comp.matrix.cols()).all(|j| comp.target.is_zero_element(&comp.matrix.column(j)));
    let lim1_zero = la.lim1.is_trivial() && lb.lim1.is_trivial() && lc.lim1.is_trivial();
    let middle = lg.kernel().module.log_order() == lf.image().module.log_order();
    let exact = composite_zero && lim1_zero && lf.is_injective() && middle && lg.is_surjective();
    Ok(MilnorReport {
        lim_orders: [la.lim.log_order(), lb.lim.log_order(), lc.lim.log_order()],
        lim1_orders: [la.lim1.log_order(), lb.lim1.log_order(), lc.lim1.log_order()],
        exact,
    })
}

impl Tower {
    /// Stage presentations and transition matrices as integer arrays mod p^M.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "precision": self.prec,
            "stages": self.stages.iter().map(|m| serde_json::json!({
                "dimension": m.gens(),
                "relations": m.relations().to_rows(),
            })).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(ZpMatrix::to_rows).collect::<Vec<_>>(),
        })
    }
}
