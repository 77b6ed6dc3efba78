use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;

use super::report::{format_float, write_table};
use crate::dense::DenseOperator;
use crate::error::Result;
use crate::model::{Interaction, LatticeGraph};
use crate::simulator::{conjugate, leakage_profile, Spectrum};

/// Leakage below this counts as inside the cone.
pub const LIGHTCONE_THRESHOLD: f64 = 1e-6;

/// Leakage profiles of `tau_t(O)` for several times.
#[derive(Debug, Clone)]
pub struct LightconeReport {
    /// `(t, profile)` in the order given, profile entries `(r, leakage)`.
    pub profiles: Vec<(f64, Vec<(usize, f64)>)>,
    pub threshold: f64,
}

impl LightconeReport {
    /// Per time, the smallest `r*` with leakage below the threshold at `r*`
    /// and every larger radius.
    pub fn radii(&self) -> Vec<(f64, usize)> {
        self.profiles
            .iter()
            .map(|(t, profile)| {
                let r_star = profile
                    .iter()
                    .rev()
                    .take_while(|&&(_, v)| v < self.threshold)
                    .last()
                    .map_or(profile.len(), |&(r, _)| r);
                (*t, r_star)
            })
            .collect()
    }

    /// Columns `t,r,leakage`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(
            w,
            &["t", "r", "leakage"],
            self.profiles.iter().flat_map(|(t, profile)| {
                profile
                    .iter()
                    .map(move |&(r, v)| vec![format_float(*t), r.to_string(), format_float(v)])
            }),
        )
    }
}

/// Evolves `observable` under `generator` (assembled on the observable's
/// sites) and measures how far it leaks outside fattenings of `anchor`.
pub fn lightcone_study(
    generator: &Interaction,
    graph: &LatticeGraph,
    observable: &DenseOperator,
    anchor: &BTreeSet<usize>,
    t_list: &[f64],
) -> Result<LightconeReport> {
    let region: BTreeSet<usize> = observable.sites().iter().copied().collect();
    let spectrum = Spectrum::new(&generator.assemble(&region)?)?;
    let profiles = t_list
        .par_iter()
        .map(|&t| {
            let evolved = conjugate(&spectrum.unitary(t), observable)?;
            Ok((t, leakage_profile(&evolved, anchor, graph)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LightconeReport {
        profiles,
        threshold: LIGHTCONE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::fixtures::{even_odd, standard_tfim};

    #[test]
    fn zero_time_has_zero_radius() {
        let m = standard_tfim(6).unwrap();
        let o = m.observable_on(&m.graph.sites()).unwrap();
        let report = lightcone_study(
            &m.interaction,
            &m.graph,
            &o,
            &BTreeSet::from([3]),
            &[0.0, 0.5, 1.5],
        )
        .unwrap();
        let radii = report.radii();
        assert_eq!(radii[0], (0.0, 0));
        assert!(radii.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(radii[2].1 > 0);
        for (_, profile) in &report.profiles {
            assert_eq!(profile.last().unwrap().1, 0.0);
        }
    }

    #[test]
    fn commuting_layer_is_strictly_local() {
        let m = standard_tfim(6).unwrap();
        let d = even_odd(&m).unwrap();
        let o = m.observable_on(&m.graph.sites()).unwrap();
        for layer in d.layers() {
            let report =
                lightcone_study(layer, &m.graph, &o, &BTreeSet::from([3]), &[0.1, 1.0, 10.0])
                    .unwrap();
            for (t, profile) in &report.profiles {
                assert!(
                    profile[1..].iter().all(|&(_, v)| v < 1e-12),
                    "t = {t}: {profile:?}"
                );
            }
        }
    }

    #[test]
    fn csv_layout() {
        let report = LightconeReport {
            profiles: vec![(0.5, vec![(0, 0.25), (1, 0.0)])],
            threshold: LIGHTCONE_THRESHOLD,
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,r,leakage\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
