//! Daily transaction counts by outcome, entity involvement and type.

use std::collections::BTreeMap;

use crate::graph::MetricSeries;
use crate::model::{EntityLabel, EntityLabelSet, Timestamp, Transaction, NANOS_PER_DAY};

#[derive(Debug, Clone, Copy, Default)]
struct DayCounts {
    total: u64,
    unsuccessful: u64,
    treasury: u64,
    hbar_foundation: u64,
    swirlds: u64,
    consensus: u64,
    token: u64,
    crypto: u64,
    other: u64,
}

impl DayCounts {
    fn successful(&self) -> u64 {
        self.total - self.unsuccessful
    }
}

fn type_slot(counts: &mut DayCounts, name: &str) -> &mut u64 {
    if name.starts_with("CONSENSUS") {
        &mut counts.consensus
    } else if name.starts_with("TOKEN") {
        &mut counts.token
    } else if name == "CRYPTOTRANSFER" {
        &mut counts.crypto
    } else {
        &mut counts.other
    }
}

/// Daily count series keyed by category name.
///
/// `total` counts every transaction and `unsuccessful` the failed ones; all
/// other categories count successful transactions only. A transaction
/// touching accounts of several labeled entities increments each of their
/// categories, so entity counts may double-count by design. The `pct_*`
/// series normalize the per-type counts by the day's successful total and
/// carry a gap on days without a successful transaction.
pub fn tx_counts_by_category<'a, I>(
    transactions: I,
    labels: &EntityLabelSet,
) -> BTreeMap<String, MetricSeries>
where
    I: IntoIterator<Item = &'a Transaction>,
{
    let mut days: BTreeMap<i64, DayCounts> = BTreeMap::new();
    for tx in transactions {
        let day = tx.consensus_timestamp.day_floor().nanos();
        let counts = days.entry(day).or_default();
        counts.total += 1;
        if !tx.is_success() {
            counts.unsuccessful += 1;
            continue;
        }
        *type_slot(counts, &tx.name) += 1;
        let (mut treasury, mut foundation, mut swirlds) = (false, false, false);
        for leg in &tx.transfers {
            match labels.label_of(leg.account) {
                EntityLabel::Treasury => treasury = true,
                EntityLabel::HbarFoundation => foundation = true,
                EntityLabel::Swirlds => swirlds = true,
                _ => {}
            }
        }
        counts.treasury += treasury as u64;
        counts.hbar_foundation += foundation as u64;
        counts.swirlds += swirlds as u64;
    }

    let mut series: BTreeMap<String, MetricSeries> = BTreeMap::new();
    let keys = [
        "total",
        "unsuccessful",
        "treasury",
        "hbar_foundation",
        "swirlds",
        "type_consensus",
        "type_token",
        "type_crypto",
        "type_other",
        "pct_consensus",
        "pct_token",
        "pct_crypto",
        "pct_other",
    ];
    for key in keys {
        series.insert(key.to_string(), MetricSeries::new(format!("tx_counts/{key}")));
    }

    let (Some(&first), Some(&last)) = (days.keys().next(), days.keys().last()) else {
        return series;
    };
    let mut day = first;
    while day <= last {
        let counts = days.get(&day).copied().unwrap_or_default();
        let ts = Timestamp::from_nanos(day);
        let absolute: [(&str, u64); 9] = [
            ("total", counts.total),
            ("unsuccessful", counts.unsuccessful),
            ("treasury", counts.treasury),
            ("hbar_foundation", counts.hbar_foundation),
            ("swirlds", counts.swirlds),
            ("type_consensus", counts.consensus),
            ("type_token", counts.token),
            ("type_crypto", counts.crypto),
            ("type_other", counts.other),
        ];
        for (key, value) in absolute {
            series.get_mut(key).unwrap().push(ts, value as f64);
        }
        let successful = counts.successful();
        if successful > 0 {
            let shares: [(&str, u64); 4] = [
                ("pct_consensus", counts.consensus),
                ("pct_token", counts.token),
                ("pct_crypto", counts.crypto),
                ("pct_other", counts.other),
            ];
            for (key, value) in shares {
                series
                    .get_mut(key)
                    .unwrap()
                    .push(ts, 100.0 * value as f64 / successful as f64);
            }
        }
        day += NANOS_PER_DAY;
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AccountId, Transfer, RESULT_SUCCESS};

    fn acct(num: u64) -> AccountId {
        AccountId::new(0, 0, num)
    }

    fn tx(day: i64, seq: i64, name: &str, ok: bool, accounts: &[u64]) -> Transaction {
        Transaction {
            consensus_timestamp: Timestamp::from_nanos(day * NANOS_PER_DAY + seq),
            name: name.to_string(),
            result: if ok { RESULT_SUCCESS.to_string() } else { "FAIL".to_string() },
            transfers: accounts
                .iter()
                .enumerate()
                .map(|(i, &num)| Transfer {
                    account: acct(num),
                    amount: if i == 0 { -10 } else { 10 },
                })
                .collect(),
        }
    }

    #[test]
    fn totals_and_failures() {
        let mut txs = Vec::new();
        for i in 0..8 {
            txs.push(tx(0, i + 1, "CRYPTOTRANSFER", true, &[1, 2]));
        }
        txs.push(tx(0, 100, "CRYPTOTRANSFER", false, &[1, 2]));
        txs.push(tx(0, 101, "CRYPTOTRANSFER", false, &[1, 2]));
        let series = tx_counts_by_category(&txs, &EntityLabelSet::new());
        assert_eq!(series["total"].points()[0].1, 10.0);
        assert_eq!(series["unsuccessful"].points()[0].1, 2.0);
        assert_eq!(series["type_crypto"].points()[0].1, 8.0);
    }

    #[test]
    fn entity_involvement_double_counts() {
        let mut labels = EntityLabelSet::new();
        labels.insert(acct(2), EntityLabel::Treasury);
        labels.insert(acct(57), EntityLabel::Swirlds);
        let txs = vec![tx(0, 1, "CRYPTOTRANSFER", true, &[2, 57])];
        let series = tx_counts_by_category(&txs, &labels);
        assert_eq!(series["treasury"].points()[0].1, 1.0);
        assert_eq!(series["swirlds"].points()[0].1, 1.0);
    }

    #[test]
    fn shares_partition_successful_traffic() {
        let txs = vec![
            tx(0, 1, "CONSENSUSSUBMITMESSAGE", true, &[1, 2]),
            tx(0, 2, "CONSENSUSSUBMITMESSAGE", true, &[1, 2]),
            tx(0, 3, "TOKENTRANSFER", true, &[1, 2]),
            tx(0, 4, "CRYPTOTRANSFER", true, &[1, 2]),
            tx(0, 5, "FILEAPPEND", false, &[1, 2]),
        ];
        let series = tx_counts_by_category(&txs, &EntityLabelSet::new());
        let total_pct: f64 = ["pct_consensus", "pct_token", "pct_crypto", "pct_other"]
            .iter()
            .map(|k| series[*k].points()[0].1)
            .sum();
        assert!((total_pct - 100.0).abs() < 1e-9);
        assert_eq!(series["pct_consensus"].points()[0].1, 50.0);
    }

    #[test]
    fn days_without_successful_traffic_leave_share_gap() {
        let txs = vec![
            tx(0, 1, "CRYPTOTRANSFER", true, &[1, 2]),
            tx(1, 1, "CRYPTOTRANSFER", false, &[1, 2]),
            tx(2, 1, "CRYPTOTRANSFER", true, &[1, 2]),
        ];
        let series = tx_counts_by_category(&txs, &EntityLabelSet::new());
        assert_eq!(series["total"].len(), 3);
        assert_eq!(series["pct_crypto"].len(), 2, "day 1 has no successful tx");
    }
}
