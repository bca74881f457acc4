//! Exhaustive enumeration of small covers.

use std::collections::BTreeMap;

use crate::cover::MonodromyCover;
use crate::orbit::canonicalize;
use crate::perm::Perm;

/// All permutations of `0..n` in lexicographic order of their images.
pub fn symmetric_group(n: usize) -> Vec<Perm> {
    let mut images: Vec<usize> = (0..n).collect();
    let mut out = vec![Perm::new(images.clone()).expect("identity")];
    loop {
        let Some(i) = (1..n).rev().find(|&i| images[i - 1] < images[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| images[j] > images[i - 1]).expect("pivot has a successor");
        images.swap(i - 1, j);
        images[i..].reverse();
        out.push(Perm::new(images.clone()).expect("rearrangement of 0..n"));
    }
}

/// Every valid cover of degree `n` over the genus-`g` surface with `k`
/// branch points. The last branch image is forced by the surface relation.
pub fn covers(genus: usize, degree: usize, branch_points: usize) -> Vec<MonodromyCover> {
    covers_filtered(genus, degree, branch_points, |_| true)
}

/// As [`covers`], keeping only tuples whose branch images all satisfy `keep`.
pub fn covers_filtered(
    genus: usize,
    degree: usize,
    branch_points: usize,
    keep: impl Fn(&Perm) -> bool,
) -> Vec<MonodromyCover> {
    enumerate(genus, degree, branch_points, false, keep)
}

/// One cycle type per entry: the non-identity permutation of that type whose
/// image array is least.
pub fn class_representatives(degree: usize) -> Vec<Perm> {
    let mut seen = BTreeMap::new();
    for p in symmetric_group(degree) {
        if !p.is_identity() {
            let mut lengths = p.cycles().lengths();
            lengths.sort_unstable();
            seen.entry(lengths).or_insert(p);
        }
    }
    seen.into_values().collect()
}

/// Covers with `c_1` restricted to [`class_representatives`] when `k ≥ 2`. Every cover
/// is a relabeling of one of these.
pub fn covers_up_to_relabeling(genus: usize, degree: usize, branch_points: usize) -> Vec<MonodromyCover> {
    enumerate(genus, degree, branch_points, true, |_| true)
}

fn enumerate(
    genus: usize,
    degree: usize,
    branch_points: usize,
    reduce_first: bool,
    keep: impl Fn(&Perm) -> bool,
) -> Vec<MonodromyCover> {
    if degree == 0 {
        return Vec::new();
    }
    let all = symmetric_group(degree);
    let branch: Vec<Perm> = all.iter().filter(|p| !p.is_identity() && keep(p)).cloned().collect();
    let first: Vec<Perm> = if reduce_first {
        class_representatives(degree).into_iter().filter(|p| keep(p)).collect()
    } else {
        branch.clone()
    };
    let free = 2 * genus + branch_points.saturating_sub(1);
    let pool = |slot: usize| match slot {
        s if s < 2 * genus => &all,
        s if s == 2 * genus => &first,
        _ => &branch,
    };
    let mut out = Vec::new();
    if (0..free).any(|s| pool(s).is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; free];
    loop {
        let chosen: Vec<&Perm> = idx.iter().enumerate().map(|(s, &i)| &pool(s)[i]).collect();
        if let Some(cover) = complete(genus, degree, branch_points, &chosen, &keep) {
            out.push(cover);
        }
        let mut s = free;
        loop {
            if s == 0 {
                return out;
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < pool(s).len() {
                break;
            }
            idx[s] = 0;
        }
    }
}

fn complete(
    genus: usize,
    degree: usize,
    branch_points: usize,
    chosen: &[&Perm],
    keep: &impl Fn(&Perm) -> bool,
) -> Option<MonodromyCover> {
    let mut product = Perm::identity(degree);
    for i in 0..genus {
        let (a, b) = (chosen[2 * i], chosen[2 * i + 1]);
        let comm = a.compose(b).ok()?.compose(&a.inverse()).ok()?.compose(&b.inverse()).ok()?;
        product = product.compose(&comm).ok()?;
    }
    let mut c: Vec<Perm> = chosen[2 * genus..].iter().map(|p| (*p).clone()).collect();
    for p in &c {
        product = product.compose(p).ok()?;
    }
    if branch_points == 0 {
        if !product.is_identity() {
            return None;
        }
    } else {
        let last = product.inverse();
        if last.is_identity() || !keep(&last) {
            return None;
        }
        c.push(last);
    }
    let a: Vec<Perm> = (0..genus).map(|i| chosen[2 * i].clone()).collect();
    let b: Vec<Perm> = (0..genus).map(|i| chosen[2 * i + 1].clone()).collect();
    MonodromyCover::from_parts(genus, degree, &a, &b, &c).ok()
}

/// One representative per relabeling class, keyed and ordered by canonical form.
pub fn classes(covers: impl IntoIterator<Item = MonodromyCover>) -> Vec<MonodromyCover> {
    let mut seen = BTreeMap::new();
    for c in covers {
        let canonical = canonicalize(&c).canonical;
        seen.entry(canonical.key()).or_insert(canonical);
    }
    seen.into_values().collect()
}
