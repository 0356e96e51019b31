use super::DesignMatrix;
use crate::dynamics::{OutcomeKind, OutcomePanel};
use crate::network::{Direction, SocialNetwork};
use crate::{Error, Real, Result};

/// Column order of the asymmetry regression of `Y(2)`.
pub const ASYMMETRY_COLUMNS: [&str; 6] = [
    "intercept",
    "own_lag",        // Y_i(1)
    "nominee_lag1",   // Σ_j A_ij Y_j(1)
    "nominator_lag1", // Σ_j A_ji Y_j(1)
    "nominee_lag0",   // Σ_j A_ij Y_j(0)
    "nominator_lag0", // Σ_j A_ji Y_j(0)
];

/// Indices into [`ASYMMETRY_COLUMNS`].
pub struct AsymmetryColumns;

impl AsymmetryColumns {
    pub const INTERCEPT: usize = 0;
    pub const OWN_LAG: usize = 1;
    pub const NOMINEE_LAG1: usize = 2;
    pub const NOMINATOR_LAG1: usize = 3;
    pub const NOMINEE_LAG0: usize = 4;
    pub const NOMINATOR_LAG0: usize = 5;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AsymmetryDesignOptions {
    /// Drop nodes that nominate nobody instead of keeping them with zero exposure.
    pub drop_non_nominators: bool,
}

/// Design and response for regressing `Y_i(2)` on the intercept, `Y_i(1)`,
/// and the out-/in-exposures to neighbours' outcomes at times 1 and 0, in the
/// order of [`ASYMMETRY_COLUMNS`]. Rows follow node order.
pub fn build_asymmetry_design<T: Real>(
    net: &SocialNetwork,
    panel: &OutcomePanel<T>,
    opts: AsymmetryDesignOptions,
) -> Result<(DesignMatrix<T>, Vec<T>)> {
    if panel.kind() != OutcomeKind::Continuous || panel.len() != 3 {
        return Err(Error::argument("asymmetry design needs a continuous panel with three time slices"));
    }
    Error::check_len(net.node_count(), panel.node_count())?;
    let (y0, y1, y2) = (panel.slice(0), panel.slice(1), panel.slice(2));
    let columns = vec![
        (ASYMMETRY_COLUMNS[1].to_string(), y1.to_vec()),
        (ASYMMETRY_COLUMNS[2].to_string(), net.exposure(Direction::Out, y1)?),
        (ASYMMETRY_COLUMNS[3].to_string(), net.exposure(Direction::In, y1)?),
        (ASYMMETRY_COLUMNS[4].to_string(), net.exposure(Direction::Out, y0)?),
        (ASYMMETRY_COLUMNS[5].to_string(), net.exposure(Direction::In, y0)?),
    ];
    let design = DesignMatrix::from_columns(true, columns)?;
    if opts.drop_non_nominators {
        let keep = |i: usize| net.out_degree(i) > 0;
        let response = (0..net.node_count()).filter(|&i| keep(i)).map(|i| y2[i]).collect();
        Ok((design.select_rows(keep), response))
    } else {
        Ok((design, y2.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(y0: Vec<f64>, y1: Vec<f64>, y2: Vec<f64>) -> OutcomePanel<f64> {
        OutcomePanel::new(OutcomeKind::Continuous, vec![0, 1, 2], vec![y0, y1, y2]).unwrap()
    }

    #[test]
    fn hand_built_two_node_design() {
        let net = SocialNetwork::from_edges(2, [(0, 1)]).unwrap();
        let p = panel(vec![0.1, 0.2], vec![1.0, 2.0], vec![3.0, 4.0]);
        let (x, y) = build_asymmetry_design(&net, &p, AsymmetryDesignOptions::default()).unwrap();
        assert_eq!(x.names(), ASYMMETRY_COLUMNS.map(String::from).as_slice());
        assert_eq!(x.row(0), &[1.0, 1.0, 2.0, 0.0, 0.2, 0.0]);
        assert_eq!(x.row(1), &[1.0, 2.0, 0.0, 1.0, 0.0, 0.1]);
        assert_eq!(y, vec![3.0, 4.0]);
    }

    #[test]
    fn empty_network_has_zero_exposures() {
        let net = SocialNetwork::empty(3).unwrap();
        let p = panel(vec![0.0; 3], vec![1.0, 2.0, 3.0], vec![0.0; 3]);
        let (x, _) = build_asymmetry_design(&net, &p, AsymmetryDesignOptions::default()).unwrap();
        for j in 2..6 {
            assert!(x.column(j).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn relabelling_nodes_permutes_rows() {
        let net = SocialNetwork::from_edges(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        let p = panel(vec![0.5, 0.1, 0.3], vec![1.0, 2.0, 4.0], vec![3.0, 4.0, 5.0]);
        // relabel: old node k becomes new node perm[k]
        let perm = [2, 0, 1];
        let net2 = SocialNetwork::from_edges(3, net.edges().map(|(i, j)| (perm[i], perm[j]))).unwrap();
        let relabel = |s: &[f64]| {
            let mut out = vec![0.0; 3];
            for k in 0..3 {
                out[perm[k]] = s[k];
            }
            out
        };
        let p2 = panel(relabel(p.slice(0)), relabel(p.slice(1)), relabel(p.slice(2)));
        let opts = AsymmetryDesignOptions::default();
        let (x, y) = build_asymmetry_design(&net, &p, opts).unwrap();
        let (x2, y2) = build_asymmetry_design(&net2, &p2, opts).unwrap();
        for k in 0..3 {
            assert_eq!(x.row(k), x2.row(perm[k]));
            assert_eq!(y[k], y2[perm[k]]);
        }
    }

    #[test]
    fn optional_row_filter_and_errors() {
        let net = SocialNetwork::from_edges(3, [(0, 1)]).unwrap();
        let p = panel(vec![0.0; 3], vec![1.0; 3], vec![7.0, 8.0, 9.0]);
        let (x, y) = build_asymmetry_design(&net, &p, AsymmetryDesignOptions { drop_non_nominators: true }).unwrap();
        assert_eq!(x.rows(), 1);
        assert_eq!(y, vec![7.0]);

        let small = SocialNetwork::empty(2).unwrap();
        assert!(matches!(
            build_asymmetry_design(&small, &p, AsymmetryDesignOptions::default()),
            Err(Error::Dimension { .. })
        ));
        let two = OutcomePanel::new(OutcomeKind::Continuous, vec![0, 1], vec![vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert!(build_asymmetry_design(&net, &two, AsymmetryDesignOptions::default()).is_err());
    }
}
