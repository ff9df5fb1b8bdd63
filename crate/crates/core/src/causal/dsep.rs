use crate::error::{Error, Result};

use super::model::CausalModel;

/// Graphical separation of `x` and `y` by `z`, decided on the moral graph
/// of the ancestral set of `x ∪ y ∪ z` with `z` deleted.
pub fn d_separated_idx(model: &CausalModel, x: &[usize], y: &[usize], z: &[usize]) -> Result<bool> {
    let n = model.len();
    let mut role = vec![0u8; n];
    for (set, tag) in [(x, 1u8), (y, 2), (z, 4)] {
        for &v in set {
            if v >= n {
                return Err(Error::InvalidCausalModel(format!("node index {v} out of range")));
            }
            if role[v] != 0 {
                return Err(Error::Usage(format!("`{}` appears in more than one set", model.label(v))));
            }
            role[v] = tag;
        }
    }

    let mut relevant = vec![false; n];
    let mut stack: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    while let Some(v) = stack.pop() {
        if !relevant[v] {
            relevant[v] = true;
            stack.extend(model.parents(v).iter().copied());
        }
    }

    let mut adj = vec![Vec::new(); n];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for v in (0..n).filter(|&v| relevant[v]) {
        let ps = model.parents(v);
        for (i, &p) in ps.iter().enumerate() {
            link(p, v, &mut adj);
            for &q in &ps[i + 1..] {
                link(p, q, &mut adj);
            }
        }
    }

    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = x.to_vec();
    while let Some(v) = stack.pop() {
        if seen[v] || role[v] == 4 {
            continue;
        }
        if role[v] == 2 {
            return Ok(false);
        }
        seen[v] = true;
        stack.extend(adj[v].iter().copied().filter(|&w| !seen[w]));
    }
    Ok(true)
}

pub fn d_separated(model: &CausalModel, x: &[&str], y: &[&str], z: &[&str]) -> Result<bool> {
    d_separated_idx(model, &model.indices_of(x)?, &model.indices_of(y)?, &model.indices_of(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::model::{EventKind, SpacetimeEvent};

    fn model(edges: &[(&str, &str)]) -> CausalModel {
        let evs = ["x", "y", "z"]
            .iter()
            .enumerate()
            .map(|(i, l)| SpacetimeEvent::new(*l, i as f64, 0.0, EventKind::Latent))
            .collect();
        CausalModel::new(evs, vec![2; 3], edges).unwrap()
    }

    #[test]
    fn chain_fork_collider() {
        let chain = model(&[("x", "z"), ("z", "y")]);
        assert!(d_separated(&chain, &["x"], &["y"], &["z"]).unwrap());
        assert!(!d_separated(&chain, &["x"], &["y"], &[]).unwrap());
        let fork = model(&[("z", "x"), ("z", "y")]);
        assert!(d_separated(&fork, &["x"], &["y"], &["z"]).unwrap());
        let collider = model(&[("x", "z"), ("y", "z")]);
        assert!(!d_separated(&collider, &["x"], &["y"], &["z"]).unwrap());
        assert!(d_separated(&collider, &["x"], &["y"], &[]).unwrap());
    }

    #[test]
    fn descendant_of_collider_opens_path() {
        let evs = ["x", "y", "z", "w"]
            .iter()
            .enumerate()
            .map(|(i, l)| SpacetimeEvent::new(*l, i as f64, 0.0, EventKind::Latent))
            .collect();
        let m = CausalModel::new(evs, vec![2; 4], &[("x", "z"), ("y", "z"), ("z", "w")]).unwrap();
        assert!(!d_separated(&m, &["x"], &["y"], &["w"]).unwrap());
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let m = model(&[]);
        assert!(matches!(d_separated(&m, &["x"], &["x"], &[]), Err(Error::Usage(_))));
    }
}
