//! The base group C₂² × C_p² together with its distinguished involutions,
//! order-p subgroups, and the coset sets built from them.
//!
//! Elements are encoded in mixed radix: index = a·p² + (β₁·p + β₂) where
//! a ∈ 0..4 encodes the Klein part (bits α₁α₂) and (β₁, β₂) ∈ Z_p² the
//! elementary abelian part. The Klein carrier A is `{0·p², 1·p², 2·p², 3·p²}`
//! and the p-part carrier P is `0..p²`.

use crate::group::{check_prime_parameter, GroupError, GroupTable, DEFAULT_MAX_P};

/// Construction choices: which order-p subgroups and which involutions are
/// paired up. Any pairwise-distinct choices are valid.
#[derive(Clone, Debug)]
pub struct BundleOptions {
    pub max_p: u64,
    /// Direction vectors (c, d) generating the subgroups ⟨(c, d)⟩ ≤ Z_p².
    pub p_dirs: [(u64, u64); 3],
    /// Klein codes (bit pairs α₁α₂ as 0..4, nonzero) of the involutions.
    pub a_codes: [u8; 3],
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions {
            max_p: DEFAULT_MAX_P,
            p_dirs: [(1, 0), (0, 1), (1, 1)],
            a_codes: [0b10, 0b01, 0b11],
        }
    }
}

/// The group G = A × P with A ≅ C₂², P ≅ C_p², the three involutions a_i,
/// the three subgroups P_i of order p, and the sets X_i = P_i·a_i and
/// Y_i = P·a_i.
#[derive(Clone, Debug)]
pub struct PaperGroupBundle {
    pub p: u64,
    pub group: GroupTable,
    pub a_set: Vec<usize>,
    pub p_set: Vec<usize>,
    pub a: [usize; 3],
    pub p_subs: [Vec<usize>; 3],
    pub x_sets: [Vec<usize>; 3],
    pub y_sets: [Vec<usize>; 3],
}

pub fn build_paper_group(p: u64) -> Result<PaperGroupBundle, GroupError> {
    build_paper_group_with(p, &BundleOptions::default())
}

pub fn build_paper_group_with(
    p: u64,
    opts: &BundleOptions,
) -> Result<PaperGroupBundle, GroupError> {
    check_prime_parameter(p, opts.max_p)?;
    let pu = p as usize;
    let pp = pu * pu;
    let order = 4 * pp;
    let group = GroupTable::from_product_fn(order, format!("C2^2xC{p}^2"), |x, y| {
        let (ax, qx) = (x / pp, x % pp);
        let (ay, qy) = (y / pp, y % pp);
        let (b1, b2) = ((qx / pu + qy / pu) % pu, (qx % pu + qy % pu) % pu);
        (ax ^ ay) * pp + b1 * pu + b2
    })?;

    let a_set: Vec<usize> = (0..4).map(|a| a * pp).collect();
    let p_set: Vec<usize> = (0..pp).collect();

    for (i, &c) in opts.a_codes.iter().enumerate() {
        if c == 0 || c > 3 {
            return Err(GroupError::BadInvolutionChoice(format!(
                "code {c} is not a nontrivial Klein element"
            )));
        }
        if opts.a_codes[..i].contains(&c) {
            return Err(GroupError::BadInvolutionChoice(format!(
                "code {c} repeated"
            )));
        }
    }
    let a = [
        opts.a_codes[0] as usize * pp,
        opts.a_codes[1] as usize * pp,
        opts.a_codes[2] as usize * pp,
    ];

    let mut p_subs: [Vec<usize>; 3] = Default::default();
    for (i, &(c, d)) in opts.p_dirs.iter().enumerate() {
        let (c, d) = (c % p, d % p);
        if c == 0 && d == 0 {
            return Err(GroupError::BadSubgroupChoice(format!(
                "direction {i} is zero"
            )));
        }
        let mut sub: Vec<usize> = (0..p)
            .map(|t| ((t * c % p) * p + t * d % p) as usize)
            .collect();
        sub.sort_unstable();
        p_subs[i] = sub;
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let common = p_subs[i]
                .iter()
                .filter(|x| p_subs[j].binary_search(x).is_ok())
                .count();
            if common != 1 {
                return Err(GroupError::BadSubgroupChoice(format!(
                    "subgroups {i} and {j} coincide"
                )));
            }
        }
    }

    let mut x_sets: [Vec<usize>; 3] = Default::default();
    let mut y_sets: [Vec<usize>; 3] = Default::default();
    for i in 0..3 {
        let mut x: Vec<usize> = p_subs[i].iter().map(|&q| group.mul(q, a[i])).collect();
        x.sort_unstable();
        x_sets[i] = x;
        let mut y: Vec<usize> = p_set.iter().map(|&q| group.mul(q, a[i])).collect();
        y.sort_unstable();
        y_sets[i] = y;
    }

    let bundle = PaperGroupBundle {
        p,
        group,
        a_set,
        p_set,
        a,
        p_subs,
        x_sets,
        y_sets,
    };
    bundle.verify()?;
    Ok(bundle)
}

impl PaperGroupBundle {
    /// rad(X) = {g : Xg = gX = X}, as a sorted element list.
    pub fn radical_of_set(&self, set: &[usize]) -> Vec<usize> {
        let g = &self.group;
        let member = |x: usize| set.binary_search(&x).is_ok();
        (0..g.order())
            .filter(|&h| {
                set.iter().all(|&x| member(g.mul(x, h)) && member(g.mul(h, x)))
            })
            .collect()
    }

    /// Re-check every structural invariant of the bundle.
    pub fn verify(&self) -> Result<(), GroupError> {
        let g = &self.group;
        let bad = |msg: String| GroupError::Malformed(msg);

        // a₁a₂ = a₃ and all three are involutions
        if g.mul(self.a[0], self.a[1]) != self.a[2] {
            return Err(bad("a1·a2 ≠ a3".into()));
        }
        for &ai in &self.a {
            if g.element_order(ai) != 2 {
                return Err(bad(format!("element {ai} is not an involution")));
            }
        }

        // P_i pairwise intersect trivially
        for i in 0..3 {
            for j in (i + 1)..3 {
                let common: Vec<usize> = self.p_subs[i]
                    .iter()
                    .copied()
                    .filter(|x| self.p_subs[j].binary_search(x).is_ok())
                    .collect();
                if common != [g.identity()] {
                    return Err(bad(format!("P{} ∩ P{} is not trivial", i + 1, j + 1)));
                }
            }
        }

        for i in 0..3 {
            // |X_i| = p, X_i inverse-closed, rad(X_i) = P_i
            if self.x_sets[i].len() as u64 != self.p {
                return Err(bad(format!("|X{}| ≠ p", i + 1)));
            }
            let mut inv: Vec<usize> = self.x_sets[i].iter().map(|&x| g.inv(x)).collect();
            inv.sort_unstable();
            if inv != self.x_sets[i] {
                return Err(bad(format!("X{} is not inverse-closed", i + 1)));
            }
            if self.radical_of_set(&self.x_sets[i]) != self.p_subs[i] {
                return Err(bad(format!("rad(X{}) ≠ P{}", i + 1, i + 1)));
            }
            // Y_i = union of the translates X_i·g over g ∈ P
            let mut union: Vec<usize> = self
                .p_set
                .iter()
                .flat_map(|&q| self.x_sets[i].iter().map(move |&x| (x, q)))
                .map(|(x, q)| g.mul(x, q))
                .collect();
            union.sort_unstable();
            union.dedup();
            if union != self.y_sets[i] {
                return Err(bad(format!("Y{} ≠ ⋃ X{}g", i + 1, i + 1)));
            }
        }

        // X_i·X_j lands inside the third coset P·a_k
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                for &x in &self.x_sets[i] {
                    for &y in &self.x_sets[j] {
                        let z = g.mul(x, y);
                        if self.y_sets[k].binary_search(&z).is_err() {
                            return Err(bad(format!(
                                "X{}·X{} leaves P·a{}",
                                i + 1,
                                j + 1,
                                k + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
