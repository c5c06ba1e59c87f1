//! Released-supply series from weekly balance snapshots.

use std::collections::BTreeMap;

use crate::graph::{GraphError, MetricSeries};
use crate::model::{
    AccountId, BalanceSnapshot, EntityLabel, EntityLabelSet, Timestamp, NANOS_PER_DAY,
    TINYBARS_PER_HBAR,
};

#[derive(Debug, Clone)]
pub struct SupplyReport {
    /// Sum of all balances held outside the Treasury, in HBAR.
    pub released: MetricSeries,
    /// Balance held by accounts whose first transaction came after the first
    /// year of the analysis period, in HBAR. Converges towards the released
    /// supply when coins flow to newcomers.
    pub late_born: MetricSeries,
}

/// Per-snapshot released supply. Snapshots must be in increasing time order.
///
/// Accounts that never appear in the archive have no birth date; they are
/// treated as predating the period and excluded from the late-born series.
pub fn released_supply(
    snapshots: &[BalanceSnapshot],
    labels: &EntityLabelSet,
    births: &BTreeMap<AccountId, Timestamp>,
    period_start: Timestamp,
) -> Result<SupplyReport, GraphError> {
    if !labels.has_label(EntityLabel::Treasury) {
        return Err(GraphError::MissingLabel {
            metric: "released_supply".to_string(),
            label: EntityLabel::Treasury,
        });
    }
    let first_year_end = Timestamp::from_nanos(period_start.nanos() + 365 * NANOS_PER_DAY);
    let mut report = SupplyReport {
        released: MetricSeries::new("released_supply"),
        late_born: MetricSeries::new("late_born_balance"),
    };
    for snapshot in snapshots {
        let mut released: u128 = 0;
        let mut late_born: u128 = 0;
        for (&account, &balance) in snapshot.balances() {
            if labels.label_of(account) == EntityLabel::Treasury {
                continue;
            }
            released += balance as u128;
            if births.get(&account).is_some_and(|&b| b > first_year_end) {
                late_born += balance as u128;
            }
        }
        let ts = snapshot.timestamp();
        report.released.push(ts, to_hbar(released));
        report.late_born.push(ts, to_hbar(late_born));
    }
    Ok(report)
}

fn to_hbar(tinybars: u128) -> f64 {
    tinybars as f64 / TINYBARS_PER_HBAR as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acct(num: u64) -> AccountId {
        AccountId::new(0, 0, num)
    }

    fn snapshot(ts: i64, entries: &[(u64, u64)]) -> BalanceSnapshot {
        let balances = entries
            .iter()
            .map(|&(num, bal)| (acct(num), bal * TINYBARS_PER_HBAR as u64))
            .collect();
        BalanceSnapshot::new(Timestamp::from_nanos(ts), balances).unwrap()
    }

    fn treasury_labels() -> EntityLabelSet {
        let mut labels = EntityLabelSet::new();
        labels.insert(acct(2), EntityLabel::Treasury);
        labels
    }

    #[test]
    fn released_excludes_treasury_only() {
        let snaps = vec![snapshot(1, &[(2, 40), (10, 35), (11, 25)])];
        let report =
            released_supply(&snaps, &treasury_labels(), &BTreeMap::new(), Timestamp::from_nanos(0))
                .unwrap();
        assert_eq!(report.released.points()[0].1, 60.0);
    }

    #[test]
    fn all_wealth_in_treasury_means_zero_released() {
        let snaps = vec![snapshot(1, &[(2, 500)])];
        let report =
            released_supply(&snaps, &treasury_labels(), &BTreeMap::new(), Timestamp::from_nanos(0))
                .unwrap();
        assert_eq!(report.released.points()[0].1, 0.0);
    }

    #[test]
    fn missing_treasury_label_is_a_configuration_error() {
        let snaps = vec![snapshot(1, &[(10, 5)])];
        let err = released_supply(
            &snaps,
            &EntityLabelSet::new(),
            &BTreeMap::new(),
            Timestamp::from_nanos(0),
        )
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("released_supply") && text.contains("Treasury"), "{text}");
    }

    #[test]
    fn late_born_counts_only_accounts_born_after_first_year() {
        let start = Timestamp::from_nanos(0);
        let mut births = BTreeMap::new();
        births.insert(acct(10), Timestamp::from_nanos(5 * NANOS_PER_DAY));
        births.insert(acct(11), Timestamp::from_nanos(400 * NANOS_PER_DAY));
        let snaps = vec![snapshot(500 * NANOS_PER_DAY, &[(2, 40), (10, 35), (11, 25)])];
        let report = released_supply(&snaps, &treasury_labels(), &births, start).unwrap();
        assert_eq!(report.late_born.points()[0].1, 25.0);
        assert!(report.late_born.points()[0].1 <= report.released.points()[0].1);
    }

    #[test]
    fn released_is_bounded_by_max_supply() {
        let snaps = vec![snapshot(1, &[(10, 49_000_000_000)])];
        let report =
            released_supply(&snaps, &treasury_labels(), &BTreeMap::new(), Timestamp::from_nanos(0))
                .unwrap();
        assert!(report.released.points()[0].1 <= 50_000_000_000.0);
    }
}
