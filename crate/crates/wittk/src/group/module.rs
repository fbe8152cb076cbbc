//! Finitely presented modules over Z/p^N and homomorphisms between them.

use super::{AbelianPGroup, ZpMatrix};
use crate::error::{Error, Result};

/// `(Z/p^N)^gens / column span of relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    relations: ZpMatrix,
}

/// A submodule together with its own presentation.
#[derive(Clone, Debug)]
pub struct Submodule {
    /// Presentation on the chosen generators.
    pub module: Module,
    /// Generators written in the ambient module's generators (ambient gens x k).
    pub inclusion: ZpMatrix,
}

impl Module {
    pub fn new(relations: ZpMatrix) -> Self {
        Module { relations }
    }

    pub fn free(p: u64, prec: u32, gens: usize) -> Self {
        Module::new(ZpMatrix::zeros(p, prec, gens, 0))
    }

    /// `⊕ Z/p^{e_k}` with exponents clipped at the precision.
    pub fn from_exponents(p: u64, prec: u32, exps: &[u32]) -> Self {
        let g = exps.len();
        let mut r = ZpMatrix::zeros(p, prec, g, g);
        for (i, &e) in exps.iter().enumerate() {
            if e < prec {
                r.set(i, i, p.pow(e));
            }
        }
        Module::new(r)
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        Module::free(p, prec, 0)
    }

    pub fn p(&self) -> u64 {
        self.relations.p()
    }

    pub fn precision(&self) -> u32 {
        self.relations.precision()
    }

    pub fn gens(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &ZpMatrix {
        &self.relations
    }

    pub fn structure(&self) -> AbelianPGroup {
        AbelianPGroup::from_exponents(self.p(), self.relations.cokernel_exponents())
    }

    pub fn log_order(&self) -> u64 {
        self.structure().log_order()
    }

    pub fn is_zero(&self) -> bool {
        self.structure().is_trivial()
    }

    /// Submodule generated by the columns of `gens` (ambient gens x k).
    pub fn submodule(&self, gens: &ZpMatrix) -> Submodule {
        assert_eq!(gens.rows(), self.gens(), "generator dimension mismatch");
        let k = gens.cols();
        let ker = gens.hconcat(&self.relations).kernel();
        Submodule {
            module: Module::new(ker.row_block(0, k)),
            inclusion: gens.clone(),
        }
    }

    /// Whether the column vector `x` is zero in the module.
    pub fn is_zero_element(&self, x: &[u64]) -> bool {
        let col = ZpMatrix::from_columns(self.p(), self.precision(), self.gens(), &[x.to_vec()]);
        let with = self.relations.hconcat(&col);
        with.cokernel_exponents() == self.relations.cokernel_exponents()
    }
}

/// A module map given on generators: column j is the image of source generator j.
#[derive(Clone, Debug)]
pub struct Hom {
    pub source: Module,
    pub target: Module,
    pub matrix: ZpMatrix,
}

impl Hom {
    pub fn new(source: Module, target: Module, matrix: ZpMatrix) -> Result<Self> {
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::invalid("hom matrix has wrong shape"));
        }
        let images = matrix.mul(source.relations());
        let widened = target.relations().hconcat(&images);
        if widened.cokernel_exponents() != target.relations().cokernel_exponents() {
            return Err(Error::invalid("matrix does not respect source relations"));
        }
        Ok(Hom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &Module) -> Self {
        Hom {
            source: m.clone(),
            target: m.clone(),
            matrix: ZpMatrix::identity(m.p(), m.precision(), m.gens()),
        }
    }

    pub fn compose(&self, after: &Hom) -> Hom {
        Hom {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: after.matrix.mul(&self.matrix),
        }
    }

    pub fn kernel(&self) -> Submodule {
        let s = self.source.gens();
        let ker = self.matrix.hconcat(self.target.relations()).kernel();
        self.source.submodule(&ker.row_block(0, s))
    }

    pub fn image(&self) -> Submodule {
        self.target.submodule(&self.matrix)
    }

    pub fn cokernel(&self) -> Module {
        Module::new(self.target.relations().hconcat(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}
