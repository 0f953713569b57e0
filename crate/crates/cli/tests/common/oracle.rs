//! Brute-force reference implementations, written against plain tuples
//! and exact rationals. Nothing here calls into the library under test.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

pub type Sp = (usize, usize);

fn q(n: usize, d: usize) -> BigRational {
    if d == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

fn f(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

fn tokens(s: Sp) -> BTreeSet<usize> {
    (s.0..s.1).collect()
}

/// Token-set Jaccard overlap.
pub fn omega(a: Sp, b: Sp) -> BigRational {
    let (x, y) = (tokens(a), tokens(b));
    q(x.intersection(&y).count(), x.union(&y).count())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OCluster {
    pub spans: Vec<Sp>,
    pub label: Option<String>,
    /// Per-mention label after propagation.
    pub mention_labels: Vec<Option<String>>,
    /// Per-mention direct label with its overlap.
    pub direct: Vec<Option<(String, BigRational)>>,
}

impl OCluster {
    /// A cluster whose label is given rather than computed.
    pub fn typed(spans: Vec<Sp>, label: Option<&str>) -> Self {
        let n = spans.len();
        OCluster {
            spans,
            label: label.map(str::to_string),
            mention_labels: vec![label.map(str::to_string); n],
            direct: vec![None; n],
        }
    }
}

/// Best semantic span for a mention, scanning every candidate.
pub fn assign(m: Sp, cner: &[(Sp, String)], tau: &BigRational, inclusive: bool) -> Option<(String, BigRational)> {
    let mut best: Option<(BigRational, Sp, String)> = None;
    for (c, label) in cner {
        let o = omega(m, *c);
        if o.is_zero() {
            continue;
        }
        let ok = if inclusive { &o >= tau } else { &o > tau };
        if !ok {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bo, bs, bl)) => o > *bo || (o == *bo && (*c, label) < (*bs, bl)),
        };
        if better {
            best = Some((o, *c, label.clone()));
        }
    }
    best.map(|(o, _, l)| (l, o))
}

/// Assignment plus majority-vote propagation over every cluster.
pub fn label_clusters(
    clusters: &[Vec<Sp>],
    cner: &[(Sp, String)],
    tau: &BigRational,
    inclusive: bool,
) -> Vec<OCluster> {
    clusters
        .iter()
        .map(|spans| {
            let direct: Vec<Option<(String, BigRational)>> =
                spans.iter().map(|&m| assign(m, cner, tau, inclusive)).collect();
            let mut votes: BTreeMap<String, (usize, BigRational)> = BTreeMap::new();
            for (l, o) in direct.iter().flatten() {
                let e = votes.entry(l.clone()).or_insert((0, BigRational::zero()));
                e.0 += 1;
                e.1 += o;
            }
            let mut label: Option<(usize, BigRational, String)> = None;
            for (l, (count, sum)) in &votes {
                let mean = sum / BigRational::from_integer((*count).into());
                let better = match &label {
                    None => true,
                    Some((bc, bm, _)) => count > bc || (count == bc && mean > *bm),
                };
                if better {
                    label = Some((*count, mean, l.clone()));
                }
            }
            let label = label.map(|(_, _, l)| l);
            let mention_labels = direct
                .iter()
                .map(|d| match d {
                    Some((l, _)) => Some(l.clone()),
                    None => label.clone(),
                })
                .collect();
            OCluster {
                spans: spans.clone(),
                label,
                mention_labels,
                direct,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    /// label -> (tp, fp, fn, support)
    pub classes: BTreeMap<String, (usize, usize, usize, usize)>,
    pub unlabeled_gold: usize,
    pub unlabeled_pred: usize,
}

type Items = Vec<(Vec<Sp>, Option<String>)>;

/// Shared counting over typed items keyed by span lists (one span for a
/// mention, two for a link). Every item is matched by scanning the whole
/// other side.
fn tally(docs: &[(Items, Items)]) -> Tally {
    let mut t = Tally::default();
    for (gold, pred) in docs {
        for (key, label) in pred {
            let Some(l) = label else {
                t.unlabeled_pred += 1;
                continue;
            };
            let hit = gold.iter().any(|(gk, gl)| gk == key && gl.as_ref() == Some(l));
            let e = t.classes.entry(l.clone()).or_default();
            if hit {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        for (key, label) in gold {
            let Some(l) = label else {
                t.unlabeled_gold += 1;
                continue;
            };
            let hit = pred.iter().any(|(pk, pl)| pk == key && pl.as_ref() == Some(l));
            let e = t.classes.entry(l.clone()).or_default();
            e.3 += 1;
            if !hit {
                e.2 += 1;
            }
        }
    }
    t
}

/// Link TP/FP: a labeled predicted pair is correct when the same pair is
/// linked in gold under any label. FN: a labeled gold pair that no
/// labeled predicted pair covers.
pub fn typed_links(docs: &[(Vec<OCluster>, Vec<OCluster>)]) -> Tally {
    let pairs = |clusters: &[OCluster]| -> Items {
        let mut out = Vec::new();
        for c in clusters {
            for i in 0..c.spans.len() {
                for j in 0..c.spans.len() {
                    if c.spans[i] < c.spans[j] {
                        out.push((vec![c.spans[i], c.spans[j]], c.label.clone()));
                    }
                }
            }
        }
        out
    };
    let mut t = Tally::default();
    for (gold, pred) in docs {
        let (g, p) = (pairs(gold), pairs(pred));
        for (key, label) in &p {
            let Some(l) = label else {
                t.unlabeled_pred += 1;
                continue;
            };
            let hit = g.iter().any(|(gk, _)| gk == key);
            let e = t.classes.entry(l.clone()).or_default();
            if hit {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        for (key, label) in &g {
            let Some(l) = label else {
                t.unlabeled_gold += 1;
                continue;
            };
            let hit = p.iter().any(|(pk, pl)| pk == key && pl.is_some());
            let e = t.classes.entry(l.clone()).or_default();
            e.3 += 1;
            if !hit {
                e.2 += 1;
            }
        }
    }
    t
}

pub fn typed_mentions(docs: &[(Vec<OCluster>, Vec<OCluster>)]) -> Tally {
    let items = |clusters: &[OCluster]| -> Items {
        clusters
            .iter()
            .flat_map(|c| {
                c.spans
                    .iter()
                    .zip(&c.mention_labels)
                    .map(|(s, l)| (vec![*s], l.clone()))
            })
            .collect()
    };
    let docs: Vec<(Items, Items)> = docs.iter().map(|(g, p)| (items(g), items(p))).collect();
    tally(&docs)
}

type Partition = Vec<Vec<Sp>>;

fn find(clusters: &Partition, m: Sp) -> Option<usize> {
    clusters.iter().position(|c| c.contains(&m))
}

fn muc_side(key: &Partition, resp: &Partition) -> (usize, usize) {
    let mut num = 0;
    let mut den = 0;
    for k in key {
        let mut cells: BTreeSet<(bool, usize)> = BTreeSet::new();
        for (i, &m) in k.iter().enumerate() {
            match find(resp, m) {
                Some(r) => cells.insert((true, r)),
                None => cells.insert((false, i)),
            };
        }
        num += k.len() - cells.len();
        den += k.len() - 1;
    }
    (num, den)
}

pub struct Prf {
    pub p: BigRational,
    pub r: BigRational,
}

impl Prf {
    pub fn f1(&self) -> BigRational {
        let s = &self.p + &self.r;
        if s.is_zero() {
            s
        } else {
            BigRational::from_integer(2.into()) * &self.p * &self.r / s
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"precision": f(&self.p), "recall": f(&self.r), "f1": f(&self.f1())})
    }
}

pub fn muc(docs: &[(Partition, Partition)]) -> Prf {
    let (mut rn, mut rd, mut pn, mut pd) = (0, 0, 0, 0);
    for (g, p) in docs {
        let (n, d) = muc_side(g, p);
        rn += n;
        rd += d;
        let (n, d) = muc_side(p, g);
        pn += n;
        pd += d;
    }
    Prf {
        p: q(pn, pd),
        r: q(rn, rd),
    }
}

pub fn b_cubed(docs: &[(Partition, Partition)]) -> Prf {
    let one_side = |key: &Partition, resp: &Partition, sum: &mut BigRational, count: &mut usize| {
        for k in key {
            for &m in k {
                *count += 1;
                if let Some(r) = find(resp, m) {
                    let shared = k.iter().filter(|x| resp[r].contains(x)).count();
                    *sum += q(shared, k.len());
                }
            }
        }
    };
    let (mut rs, mut rc, mut ps, mut pc) = (BigRational::zero(), 0, BigRational::zero(), 0);
    for (g, p) in docs {
        one_side(g, p, &mut rs, &mut rc);
        one_side(p, g, &mut ps, &mut pc);
    }
    let avg = |s: BigRational, c: usize| {
        if c == 0 {
            BigRational::zero()
        } else {
            s / BigRational::from_integer(c.into())
        }
    };
    Prf {
        p: avg(ps, pc),
        r: avg(rs, rc),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn phi4(a: &[Sp], b: &[Sp]) -> BigRational {
    q(2 * a.iter().filter(|x| b.contains(x)).count(), a.len() + b.len())
}

/// Best total φ4 similarity of one document by trying every one-to-one
/// matching of the padded cluster lists.
pub fn ceaf_best(g: &Partition, p: &Partition) -> BigRational {
    let n = g.len().max(p.len());
    let mut best = BigRational::zero();
    for perm in permutations(n) {
        let mut total = BigRational::zero();
        for (i, &j) in perm.iter().enumerate() {
            if i < g.len() && j < p.len() {
                total += phi4(&g[i], &p[j]);
            }
        }
        if total > best {
            best = total;
        }
    }
    best
}

pub fn ceaf(docs: &[(Partition, Partition)]) -> Prf {
    let mut total = BigRational::zero();
    let (mut gc, mut pc) = (0, 0);
    for (g, p) in docs {
        gc += g.len();
        pc += p.len();
        total += ceaf_best(g, p);
    }
    let over = |c: usize| {
        if c == 0 {
            BigRational::zero()
        } else {
            &total / BigRational::from_integer(c.into())
        }
    };
    Prf {
        p: over(pc),
        r: over(gc),
    }
}

/// The score fields of one tally, as the eval report lays them out.
pub fn typed_json(t: &Tally, mode: &str, link_source: Option<&str>) -> Value {
    let row = |tp: usize, fp: usize, fn_: usize, support: usize| {
        json!({
            "tp": tp, "fp": fp, "fn": fn_, "support": support,
            "precision": f(&q(tp, tp + fp)),
            "recall": f(&q(tp, tp + fn_)),
            "f1": f(&q(2 * tp, 2 * tp + fp + fn_)),
        })
    };
    let mut per_class = serde_json::Map::new();
    let (mut tp, mut fp, mut fn_, mut support) = (0, 0, 0, 0);
    let mut averaging = Vec::new();
    let mut system_only = Vec::new();
    let mut f1_sum = BigRational::zero();
    for (label, &(a, b, c, s)) in &t.classes {
        per_class.insert(label.clone(), row(a, b, c, s));
        tp += a;
        fp += b;
        fn_ += c;
        support += s;
        if s > 0 {
            averaging.push(label.clone());
            f1_sum += q(2 * a, 2 * a + b + c);
        } else {
            system_only.push(label.clone());
        }
    }
    let macro_f1 = if averaging.is_empty() {
        0.0
    } else {
        f(&(f1_sum / BigRational::from_integer(averaging.len().into())))
    };
    let mut out = json!({
        "mode": mode,
        "per_class": per_class,
        "micro": row(tp, fp, fn_, support),
        "macro_f1": macro_f1,
        "averaging_classes": averaging,
        "system_only_classes": system_only,
        "unlabeled_gold": t.unlabeled_gold,
        "unlabeled_predicted": t.unlabeled_pred,
    });
    if let Some(src) = link_source {
        out["link_mention_source"] = json!(src);
    }
    out
}

/// One document of a raw (unlabeled) evaluation corpus.
#[derive(Debug, Clone)]
pub struct RawDoc {
    pub doc_id: String,
    pub gold: Partition,
    pub pred: Partition,
    pub cner: Vec<(Sp, String)>,
}

fn spans_of(v: &Value) -> Partition {
    v.as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    c.as_array()
                        .unwrap()
                        .iter()
                        .map(|s| (s[0].as_u64().unwrap() as usize, s[1].as_u64().unwrap() as usize))
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Reads a gold JSONL (clusters + cner) and a prediction JSONL
/// (`predicted_clusters`), matched by doc_id.
pub fn read_raw(gold_jsonl: &str, pred_jsonl: &str) -> Vec<RawDoc> {
    let preds: BTreeMap<String, Partition> = pred_jsonl
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            (
                v["doc_id"].as_str().unwrap().to_string(),
                spans_of(&v["predicted_clusters"]),
            )
        })
        .collect();
    gold_jsonl
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            let doc_id = v["doc_id"].as_str().unwrap().to_string();
            let cner = v["cner"]
                .as_array()
                .map(|a| {
                    a.iter()
                        .map(|t| {
                            let s = (t[0].as_u64().unwrap() as usize, t[1].as_u64().unwrap() as usize);
                            (s, t[2].as_str().unwrap().to_uppercase())
                        })
                        .collect()
                })
                .unwrap_or_default();
            RawDoc {
                pred: preds[&doc_id].clone(),
                gold: spans_of(&v["gold_clusters"]),
                doc_id,
                cner,
            }
        })
        .collect()
}

/// The full default `eval` report (all modes, tau 0.5 strict, predicted
/// link mentions, singletons kept), serialized like the CLI writes it.
pub fn eval_report(docs: &[RawDoc]) -> String {
    let tau = q(1, 2);
    let labeled: Vec<(Vec<OCluster>, Vec<OCluster>)> = docs
        .iter()
        .map(|d| {
            (
                label_clusters(&d.gold, &d.cner, &tau, false),
                label_clusters(&d.pred, &d.cner, &tau, false),
            )
        })
        .collect();
    let partitions: Vec<(Partition, Partition)> = docs.iter().map(|d| (d.gold.clone(), d.pred.clone())).collect();
    let (m, b, c) = (muc(&partitions), b_cubed(&partitions), ceaf(&partitions));
    let conll = (f(&m.f1()) + f(&b.f1()) + f(&c.f1())) / 3.0;
    let report = json!({
        "settings": {
            "tau": 0.5,
            "tau_inclusive": false,
            "force_cluster_label": false,
            "drop_singletons": false,
            "link_mention_source": "predicted",
        },
        "classic": {
            "muc": m.to_json(),
            "b_cubed": b.to_json(),
            "ceaf_phi4": c.to_json(),
            "conll_f1": conll,
        },
        "typed_mention": typed_json(&typed_mentions(&labeled), "mention", None),
        "typed_link": typed_json(&typed_links(&labeled), "link", Some("predicted")),
    });
    let mut out = serde_json::to_string_pretty(&report).unwrap();
    out.push('\n');
    out
}

/// Whether any labeling decision in these clusters falls through to the
/// label-name comparison (two labels on the same best span, or a vote tied
/// on both count and mean overlap).
pub fn has_name_tie(clusters: &[Vec<Sp>], cner: &[(Sp, String)], tau: &BigRational, inclusive: bool) -> bool {
    for spans in clusters {
        let mut votes: BTreeMap<String, (usize, BigRational)> = BTreeMap::new();
        for &m in spans {
            let passing: Vec<(BigRational, Sp, &String)> = cner
                .iter()
                .map(|(c, l)| (omega(m, *c), *c, l))
                .filter(|(o, _, _)| !o.is_zero() && if inclusive { o >= tau } else { o > tau })
                .collect();
            let Some(top) = passing.iter().map(|(o, c, _)| (o.clone(), std::cmp::Reverse(*c))).max() else {
                continue;
            };
            let best: BTreeSet<&String> = passing
                .iter()
                .filter(|(o, c, _)| *o == top.0 && *c == top.1 .0)
                .map(|(_, _, l)| *l)
                .collect();
            if best.len() > 1 {
                return true;
            }
            let e = votes
                .entry(best.into_iter().next().unwrap().clone())
                .or_insert((0, BigRational::zero()));
            e.0 += 1;
            e.1 += top.0;
        }
        let keyed: Vec<(usize, BigRational)> = votes
            .values()
            .map(|(c, s)| (*c, s / BigRational::from_integer((*c).into())))
            .collect();
        if let Some(top) = keyed.iter().max() {
            if keyed.iter().filter(|k| *k == top).count() > 1 {
                return true;
            }
        }
    }
    false
}
