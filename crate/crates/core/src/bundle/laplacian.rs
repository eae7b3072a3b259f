use super::DiscreteBundle;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, C64};
use crate::params::PhysicalParams;

/// `H = −(ħ²/2m) Δ + V` with `(Δψ)(q) = a⁻² Σ_{q→r} (U_{r→q} ψ(r) − ψ(q))`.
///
/// Rows and columns are indexed by `vertex · rank + fiber component`.
pub fn connection_laplacian(bundle: &DiscreteBundle, potential: &[f64], params: &PhysicalParams) -> Result<CsrMatrix> {
    params.validate()?;
    let g = bundle.graph();
    if potential.len() != g.n_vertices() {
        return Err(Error::Domain(format!(
            "potential has {} values for {} vertices",
            potential.len(),
            g.n_vertices()
        )));
    }
    if let Some(v) = potential.iter().position(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("potential is not finite at vertex {v}")));
    }
    let r = bundle.rank();
    let t = params.hopping();
    let mut triplets = Vec::with_capacity(g.n_vertices() * r + 2 * g.n_edges() * r * r);
    for v in 0..g.n_vertices() {
        let diag = C64::from(t * g.degree(v) as f64 + potential[v]);
        for i in 0..r {
            triplets.push((v * r + i, v * r + i, diag));
        }
    }
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        // the link maps fiber(a) to fiber(b): it fills block (b, a), its adjoint block (a, b)
        let u = &bundle.links()[e];
        for i in 0..r {
            for j in 0..r {
                let x = u[(i, j)];
                if x != C64::new(0.0, 0.0) {
                    triplets.push((b * r + i, a * r + j, -t * x));
                    triplets.push((a * r + j, b * r + i, -t * x.conj()));
                }
            }
        }
    }
    let n = g.n_vertices() * r;
    Ok(CsrMatrix::from_triplets(n, n, triplets))
}
