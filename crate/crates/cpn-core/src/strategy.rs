//! Feedback strategy trees for the conditional-pulse-nulling receiver: belief-state
//! propagation, exact evaluation, dynamic-programming optimization, an exhaustive
//! oracle for small M, and JSON export/import.
//!
//! A strategy is a perfect binary tree of depth M: each internal node at depth k
//! holds the displacement control applied in slot k+1, with the two children
//! selected by that slot's click outcome; each leaf holds the terminal decision.

use crate::detection::{click_probability, control_set, no_click_probability, Control, DetectionModel};
use crate::error::{CpnError, Result};
use crate::signal::{Amplitude, Family, SignalEnsemble};

/// Belief entries below this are clamped to exactly zero to avoid denormals.
/// Observable in exported trees, hence documented.
pub const BELIEF_FLOOR: f64 = 1e-300;

/// Leaf probability masses must sum to 1 within this tolerance for any evaluated tree.
pub const LEAF_MASS_TOL: f64 = 1e-10;

/// Relative tolerance for matching a strategy's stored n̄ against an ensemble's.
const N_BAR_MATCH_TOL: f64 = 1e-9;

/// Largest M accepted when materializing trees (2^M leaves).
const MAX_TREE_SLOTS: usize = 24;

/// Binary result of one slot's on-off measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClickOutcome {
    NoClick,
    Click,
}

/// Unnormalized joint probabilities p_{i,z'}: entry i is the probability that
/// hypothesis i was sent *and* the partial outcome record z' was observed, after
/// `depth` slots have been measured.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    joint: Vec<f64>,
    depth: usize,
}

impl BeliefState {
    /// Depth-0 belief: the priors.
    pub fn initial(ensemble: &SignalEnsemble) -> Self {
        BeliefState { joint: ensemble.priors().to_vec(), depth: 0 }
    }

    /// Arbitrary starting belief (mainly for tests and FFI callers).
    pub fn from_joint(joint: Vec<f64>, depth: usize) -> Result<Self> {
        if joint.is_empty() {
            return Err(CpnError::InvalidStrategy("belief state must be nonempty".into()));
        }
        for (i, &x) in joint.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(CpnError::InvalidStrategy(format!("belief entry {i} is {x}")));
            }
        }
        Ok(BeliefState { joint, depth })
    }

    pub fn joint(&self) -> &[f64] {
        &self.joint
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn total_mass(&self) -> f64 {
        self.joint.iter().sum()
    }
}

/// Advance a belief through one slot's measurement: entry i is multiplied by the
/// probability of `outcome` given hypothesis i's symbol in (1-based) slot
/// `slot_index` under `control`. The depth increments; entries below
/// [`BELIEF_FLOOR`] are clamped to zero.
pub fn belief_update(
    state: &BeliefState,
    control: Control,
    outcome: ClickOutcome,
    slot_index: usize,
    ensemble: &SignalEnsemble,
    model: DetectionModel,
) -> Result<BeliefState> {
    let m = ensemble.m_slots();
    let n = ensemble.num_codewords();
    if slot_index == 0 || slot_index > m {
        return Err(CpnError::InvalidStrategy(format!(
            "slot index {slot_index} outside 1..={m}"
        )));
    }
    if state.depth != slot_index - 1 {
        return Err(CpnError::InvalidStrategy(format!(
            "belief depth {} cannot be advanced through slot {slot_index}",
            state.depth
        )));
    }
    if state.joint.len() != n {
        return Err(CpnError::InvalidStrategy(format!(
            "belief has {} entries for {n} hypotheses",
            state.joint.len()
        )));
    }
    if control.family() != ensemble.family() {
        return Err(CpnError::InvalidStrategy(format!(
            "{} control applied to a {} ensemble",
            control.family().label(),
            ensemble.family().label()
        )));
    }
    let amplitude = ensemble.amplitude();
    let mut joint = Vec::with_capacity(n);
    for i in 0..n {
        let symbol = ensemble.codeword(i).symbol(slot_index - 1);
        let lik = match outcome {
            ClickOutcome::NoClick => no_click_probability(symbol, control, amplitude, model)?,
            ClickOutcome::Click => click_probability(symbol, control, amplitude, model)?,
        };
        let x = lik * state.joint[i];
        joint.push(if x < BELIEF_FLOOR { 0.0 } else { x });
    }
    Ok(BeliefState { joint, depth: slot_index })
}

/// MAP decision for a belief: the lowest index attaining the maximum joint
/// probability. An all-zero belief returns index 0.
pub fn map_decision(state: &BeliefState) -> usize {
    let mut best = 0usize;
    let mut best_v = state.joint[0];
    for (i, &x) in state.joint.iter().enumerate().skip(1) {
        if x > best_v {
            best = i;
            best_v = x;
        }
    }
    best
}

/// One node of a strategy tree.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyNode {
    Internal {
        control: Control,
        no_click: Box<StrategyNode>,
        click: Box<StrategyNode>,
    },
    Leaf {
        decision: usize,
        joint_prob: f64,
    },
}

impl StrategyNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self, StrategyNode::Leaf { .. })
    }
}

/// A perfect binary strategy tree of depth `m_slots`, tagged with the family and
/// per-pulse mean photon number it was built for.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyTree {
    m_slots: usize,
    family: Family,
    n_bar: f64,
    root: StrategyNode,
}

impl StrategyTree {
    /// Validate shape (perfect tree of depth `m_slots`, all controls legal for the
    /// family) and wrap the root.
    pub fn new(m_slots: usize, family: Family, n_bar: f64, root: StrategyNode) -> Result<Self> {
        if m_slots == 0 || m_slots > MAX_TREE_SLOTS {
            return Err(CpnError::InvalidStrategy(format!(
                "m_slots must lie in 1..={MAX_TREE_SLOTS}, got {m_slots}"
            )));
        }
        if !n_bar.is_finite() || n_bar < 0.0 {
            return Err(CpnError::InvalidStrategy(format!("n_bar is {n_bar}")));
        }
        fn check(node: &StrategyNode, depth: usize, m: usize, family: Family) -> Result<()> {
            match node {
                StrategyNode::Internal { control, no_click, click } => {
                    if depth == m {
                        return Err(CpnError::InvalidStrategy(format!(
                            "internal node at depth {depth}, expected a leaf"
                        )));
                    }
                    if control.family() != family {
                        return Err(CpnError::InvalidStrategy(format!(
                            "{} control in a {} tree",
                            control.family().label(),
                            family.label()
                        )));
                    }
                    check(no_click, depth + 1, m, family)?;
                    check(click, depth + 1, m, family)
                }
                StrategyNode::Leaf { joint_prob, .. } => {
                    if depth != m {
                        return Err(CpnError::InvalidStrategy(format!(
                            "leaf at depth {depth}, expected depth {m}"
                        )));
                    }
                    if !joint_prob.is_finite() || *joint_prob < 0.0 {
                        return Err(CpnError::InvalidStrategy(format!(
                            "leaf joint probability is {joint_prob}"
                        )));
                    }
                    Ok(())
                }
            }
        }
        check(&root, 0, m_slots, family)?;
        Ok(StrategyTree { m_slots, family, n_bar, root })
    }

    /// Perfect tree applying the same control in every slot, with placeholder
    /// leaves (filled by [`evaluate_strategy`]). The all-direct-detect baseline is
    /// `with_constant_control(ens, control_set(ens.family(), ens.amplitude())[0])`
    /// for an OOK-like ensemble.
    pub fn with_constant_control(ensemble: &SignalEnsemble, control: Control) -> Result<Self> {
        fn build(depth_left: usize, control: Control) -> StrategyNode {
            if depth_left == 0 {
                StrategyNode::Leaf { decision: 0, joint_prob: 0.0 }
            } else {
                StrategyNode::Internal {
                    control,
                    no_click: Box::new(build(depth_left - 1, control)),
                    click: Box::new(build(depth_left - 1, control)),
                }
            }
        }
        StrategyTree::new(
            ensemble.m_slots(),
            ensemble.family(),
            ensemble.n_bar(),
            build(ensemble.m_slots(), control),
        )
    }

    pub fn m_slots(&self) -> usize {
        self.m_slots
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The per-pulse mean photon number the tree was built for.
    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn root(&self) -> &StrategyNode {
        &self.root
    }

    /// Check that this tree can act on `ensemble` (slot count, family, n̄ within a
    /// small relative tolerance).
    pub fn validate_against(&self, ensemble: &SignalEnsemble) -> Result<()> {
        if self.m_slots != ensemble.m_slots() {
            return Err(CpnError::InvalidStrategy(format!(
                "tree has {} slots, ensemble has {}",
                self.m_slots,
                ensemble.m_slots()
            )));
        }
        if self.family != ensemble.family() {
            return Err(CpnError::InvalidStrategy(format!(
                "{} tree applied to a {} ensemble",
                self.family.label(),
                ensemble.family().label()
            )));
        }
        let nb = ensemble.n_bar();
        if (self.n_bar - nb).abs() > N_BAR_MATCH_TOL * nb.max(1.0) {
            return Err(CpnError::InvalidStrategy(format!(
                "tree built for n_bar = {}, ensemble has n_bar = {nb}",
                self.n_bar
            )));
        }
        Ok(())
    }
}

/// Exact outcome of evaluating a strategy tree against an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Success probability P_c = Σ_leaves max_i p_{i,z}.
    pub p_correct: f64,
    /// Error probability, accumulated directly as the non-decision mass of every
    /// leaf (not as 1 − P_c, which loses all precision once P_c ≈ 1).
    pub p_error: f64,
    /// Total leaf mass Σ_leaves Σ_i p_{i,z}; equals 1 up to roundoff.
    pub leaf_mass: f64,
}

/// Exactly evaluate a strategy: propagate beliefs down all 2^M outcome paths,
/// take the MAP decision at each leaf, and write decisions and leaf probabilities
/// back into the tree. Controls are snapped to the ensemble's control set first.
pub fn evaluate_strategy(
    ensemble: &SignalEnsemble,
    model: DetectionModel,
    tree: &mut StrategyTree,
) -> Result<Evaluation> {
    tree.validate_against(ensemble)?;
    conform_controls(&mut tree.root, ensemble)?;
    let mut acc = Evaluation { p_correct: 0.0, p_error: 0.0, leaf_mass: 0.0 };
    let init = BeliefState::initial(ensemble);
    eval_node(ensemble, model, &mut tree.root, &init, 1, &mut acc)?;
    Ok(acc)
}

/// Re-validate every control against the ensemble's control set, snapping β
/// exactly (an imported tree's n̄ may differ from the ensemble's in the last few
/// digits, and with it the stored ±α values).
fn conform_controls(node: &mut StrategyNode, ensemble: &SignalEnsemble) -> Result<()> {
    if let StrategyNode::Internal { control, no_click, click } = node {
        *control = Control::new(control.beta(), ensemble.family(), ensemble.amplitude())?;
        conform_controls(no_click, ensemble)?;
        conform_controls(click, ensemble)?;
    }
    Ok(())
}

fn eval_node(
    ensemble: &SignalEnsemble,
    model: DetectionModel,
    node: &mut StrategyNode,
    state: &BeliefState,
    slot: usize,
    acc: &mut Evaluation,
) -> Result<()> {
    match node {
        StrategyNode::Internal { control, no_click, click } => {
            let s0 = belief_update(state, *control, ClickOutcome::NoClick, slot, ensemble, model)?;
            eval_node(ensemble, model, no_click, &s0, slot + 1, acc)?;
            let s1 = belief_update(state, *control, ClickOutcome::Click, slot, ensemble, model)?;
            eval_node(ensemble, model, click, &s1, slot + 1, acc)?;
        }
        StrategyNode::Leaf { decision, joint_prob } => {
            let d = map_decision(state);
            let mut mass = 0.0;
            let mut residual = 0.0;
            for (i, &x) in state.joint().iter().enumerate() {
                mass += x;
                if i != d {
                    residual += x;
                }
            }
            *decision = d;
            *joint_prob = state.joint()[d];
            acc.p_correct += state.joint()[d];
            acc.p_error += residual;
            acc.leaf_mass += mass;
        }
    }
    Ok(())
}

/// Per-slot likelihood lookup used by the optimizer's inner recursion:
/// `no_click`/`click` likelihood for (slot, control index, hypothesis).
struct LikelihoodTable {
    n: usize,
    no_click: Vec<f64>,
    click: Vec<f64>,
}

impl LikelihoodTable {
    fn build(ensemble: &SignalEnsemble, model: DetectionModel, set: &[Control; 2]) -> Result<Self> {
        let m = ensemble.m_slots();
        let n = ensemble.num_codewords();
        let mut no_click = Vec::with_capacity(m * 2 * n);
        let mut click = Vec::with_capacity(m * 2 * n);
        for slot in 0..m {
            for control in set {
                for i in 0..n {
                    let symbol = ensemble.codeword(i).symbol(slot);
                    let s = no_click_probability(symbol, *control, ensemble.amplitude(), model)?;
                    no_click.push(s);
                    click.push(1.0 - s);
                }
            }
        }
        Ok(LikelihoodTable { n, no_click, click })
    }

    #[inline]
    fn slice(&self, outcome_click: bool, slot: usize, ctl: usize) -> &[f64] {
        let base = (slot * 2 + ctl) * self.n;
        let arr = if outcome_click { &self.click } else { &self.no_click };
        &arr[base..base + self.n]
    }

    /// Child belief for one outcome, with the same floor clamp as [`belief_update`].
    fn child(&self, belief: &[f64], slot: usize, ctl: usize, outcome_click: bool) -> Vec<f64> {
        let lik = self.slice(outcome_click, slot, ctl);
        belief
            .iter()
            .zip(lik)
            .map(|(&b, &l)| {
                let x = l * b;
                if x < BELIEF_FLOOR {
                    0.0
                } else {
                    x
                }
            })
            .collect()
    }
}

/// Optimal strategy by the reward-to-go dynamic program.
///
/// `value(s, k) = max_{β ∈ Σ} [ value(s∘P(no click | β), k+1) + value(s∘P(click | β), k+1) ]`
/// with the depth-M base case `max_i s_i`. Returns the argmax tree (leaves already
/// populated with MAP decisions and joint probabilities) and its success
/// probability P_c. Control ties break toward the first element of the control
/// set; MAP ties toward the lowest hypothesis index.
pub fn optimize(ensemble: &SignalEnsemble, model: DetectionModel) -> Result<(StrategyTree, f64)> {
    let m = ensemble.m_slots();
    if m > MAX_TREE_SLOTS {
        return Err(CpnError::InvalidEnsemble(format!(
            "strategy optimization is limited to M ≤ {MAX_TREE_SLOTS} slots, got {m}"
        )));
    }
    let set = control_set(ensemble.family(), ensemble.amplitude());
    let table = LikelihoodTable::build(ensemble, model, &set)?;
    let priors = ensemble.priors().to_vec();
    let (value, root) = optimize_node(&table, &set, &priors, 0, m);
    let tree = StrategyTree::new(m, ensemble.family(), ensemble.n_bar(), root)?;
    Ok((tree, value))
}

fn optimize_node(
    table: &LikelihoodTable,
    set: &[Control; 2],
    belief: &[f64],
    depth: usize,
    m: usize,
) -> (f64, StrategyNode) {
    if depth == m {
        let mut best = 0usize;
        let mut best_v = belief[0];
        for (i, &x) in belief.iter().enumerate().skip(1) {
            if x > best_v {
                best = i;
                best_v = x;
            }
        }
        return (best_v, StrategyNode::Leaf { decision: best, joint_prob: best_v });
    }
    let mut chosen: Option<(f64, StrategyNode)> = None;
    for (ci, control) in set.iter().enumerate() {
        let no = table.child(belief, depth, ci, false);
        let (v0, n0) = optimize_node(table, set, &no, depth + 1, m);
        let yes = table.child(belief, depth, ci, true);
        let (v1, n1) = optimize_node(table, set, &yes, depth + 1, m);
        let v = v0 + v1;
        // Strictly-greater keeps the first control on ties.
        let better = match &chosen {
            None => true,
            Some((best_v, _)) => v > *best_v,
        };
        if better {
            chosen = Some((
                v,
                StrategyNode::Internal {
                    control: *control,
                    no_click: Box::new(n0),
                    click: Box::new(n1),
                },
            ));
        }
    }
    chosen.expect("control set is nonempty")
}

/// Largest M accepted by [`exhaustive_search`].
pub const EXHAUSTIVE_MAX_SLOTS: usize = 4;

/// Brute-force oracle: enumerate every assignment of controls to the 2^M − 1
/// internal nodes, evaluate each tree exactly, and return the best. Tree
/// assignments are enumerated with the all-first-control tree first, so ties
/// resolve the same way as [`optimize`].
pub fn exhaustive_search(
    ensemble: &SignalEnsemble,
    model: DetectionModel,
) -> Result<(StrategyTree, f64)> {
    let m = ensemble.m_slots();
    if m > EXHAUSTIVE_MAX_SLOTS {
        return Err(CpnError::InvalidEnsemble(format!(
            "exhaustive strategy search is limited to M ≤ {EXHAUSTIVE_MAX_SLOTS} slots \
             (got M = {m}); it enumerates 2^(2^M − 1) strategies"
        )));
    }
    let set = control_set(ensemble.family(), ensemble.amplitude());
    let internal_nodes = (1u32 << m) - 1;

    // Heap-indexed perfect tree: node k's children are 2k+1 / 2k+2; bit k of
    // `assign` selects node k's control.
    fn build(depth: usize, idx: usize, assign: u64, set: &[Control; 2], m: usize) -> StrategyNode {
        if depth == m {
            StrategyNode::Leaf { decision: 0, joint_prob: 0.0 }
        } else {
            let ci = ((assign >> idx) & 1) as usize;
            StrategyNode::Internal {
                control: set[ci],
                no_click: Box::new(build(depth + 1, 2 * idx + 1, assign, set, m)),
                click: Box::new(build(depth + 1, 2 * idx + 2, assign, set, m)),
            }
        }
    }

    let mut best: Option<(StrategyTree, f64)> = None;
    for assign in 0..(1u64 << internal_nodes) {
        let root = build(0, 0, assign, &set, m);
        let mut tree = StrategyTree::new(m, ensemble.family(), ensemble.n_bar(), root)?;
        let eval = evaluate_strategy(ensemble, model, &mut tree)?;
        let better = match &best {
            None => true,
            Some((_, best_v)) => eval.p_correct > *best_v,
        };
        if better {
            best = Some((tree, eval.p_correct));
        }
    }
    Ok(best.expect("at least one strategy enumerated"))
}

fn fmt_float(x: f64) -> String {
    // 17 significant digits: enough to round-trip any f64 exactly.
    format!("{:.16e}", x)
}

/// Serialize a tree to the strategy JSON schema:
/// `{"m_slots": int, "family": "ook"|"bpsk", "n_bar": float, "root": NODE}` where
/// NODE is `{"beta": float, "no_click": NODE|LEAF, "click": NODE|LEAF}` and LEAF is
/// `{"decision": int, "joint_prob": float}`. Floats carry 17 significant digits.
pub fn export_strategy(tree: &StrategyTree) -> String {
    fn write_node(out: &mut String, node: &StrategyNode, level: usize) {
        match node {
            StrategyNode::Internal { control, no_click, click } => {
                let ind = "  ".repeat(level + 1);
                out.push_str("{\n");
                out.push_str(&format!("{ind}\"beta\": {},\n", fmt_float(control.beta())));
                out.push_str(&format!("{ind}\"no_click\": "));
                write_node(out, no_click, level + 1);
                out.push_str(",\n");
                out.push_str(&format!("{ind}\"click\": "));
                write_node(out, click, level + 1);
                out.push('\n');
                out.push_str(&"  ".repeat(level));
                out.push('}');
            }
            StrategyNode::Leaf { decision, joint_prob } => {
                out.push_str(&format!(
                    "{{\"decision\": {decision}, \"joint_prob\": {}}}",
                    fmt_float(*joint_prob)
                ));
            }
        }
    }
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"m_slots\": {},\n", tree.m_slots));
    out.push_str(&format!("  \"family\": \"{}\",\n", tree.family.label()));
    out.push_str(&format!("  \"n_bar\": {},\n", fmt_float(tree.n_bar)));
    out.push_str("  \"root\": ");
    write_node(&mut out, &tree.root, 1);
    out.push_str("\n}\n");
    out
}

/// Parse a strategy from the JSON schema produced by [`export_strategy`].
///
/// The tree shape must be a perfect binary tree of the declared depth, every β
/// must lie in the family's control set at the declared n̄ (within a small
/// snapping tolerance), and no unknown keys are accepted.
pub fn import_strategy(text: &str) -> Result<StrategyTree> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CpnError::Parse(format!("strategy JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| CpnError::InvalidStrategy("top level must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "m_slots" | "family" | "n_bar" | "root") {
            return Err(CpnError::InvalidStrategy(format!("unknown key {key:?}")));
        }
    }
    let m_slots = obj
        .get("m_slots")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CpnError::InvalidStrategy("missing or non-integer \"m_slots\"".into()))?
        as usize;
    let family = Family::from_label(
        obj.get("family")
            .and_then(|x| x.as_str())
            .ok_or_else(|| CpnError::InvalidStrategy("missing or non-string \"family\"".into()))?,
    )?;
    let n_bar = obj
        .get("n_bar")
        .and_then(|x| x.as_f64())
        .ok_or_else(|| CpnError::InvalidStrategy("missing or non-numeric \"n_bar\"".into()))?;
    if !n_bar.is_finite() || n_bar < 0.0 {
        return Err(CpnError::InvalidStrategy(format!("n_bar is {n_bar}")));
    }
    let amplitude = Amplitude::from_n_bar(n_bar)
        .map_err(|_| CpnError::InvalidStrategy(format!("n_bar is {n_bar}")))?;
    let root_v = obj
        .get("root")
        .ok_or_else(|| CpnError::InvalidStrategy("missing \"root\"".into()))?;
    if m_slots == 0 || m_slots > MAX_TREE_SLOTS {
        return Err(CpnError::InvalidStrategy(format!(
            "m_slots must lie in 1..={MAX_TREE_SLOTS}, got {m_slots}"
        )));
    }

    fn parse_node(
        v: &serde_json::Value,
        depth: usize,
        m: usize,
        family: Family,
        amplitude: Amplitude,
    ) -> Result<StrategyNode> {
        let obj = v.as_object().ok_or_else(|| {
            CpnError::InvalidStrategy(format!("node at depth {depth} is not an object"))
        })?;
        let has_beta = obj.contains_key("beta");
        let has_decision = obj.contains_key("decision");
        if has_beta && has_decision {
            return Err(CpnError::InvalidStrategy(format!(
                "node at depth {depth} mixes \"beta\" and \"decision\""
            )));
        }
        if depth < m {
            if !has_beta {
                return Err(CpnError::InvalidStrategy(format!(
                    "expected an internal node at depth {depth} (missing \"beta\")"
                )));
            }
            for key in obj.keys() {
                if !matches!(key.as_str(), "beta" | "no_click" | "click") {
                    return Err(CpnError::InvalidStrategy(format!(
                        "unknown key {key:?} in internal node"
                    )));
                }
            }
            let beta = obj
                .get("beta")
                .and_then(|x| x.as_f64())
                .ok_or_else(|| CpnError::InvalidStrategy("non-numeric \"beta\"".into()))?;
            let control = Control::new(beta, family, amplitude)?;
            let no_click = obj.get("no_click").ok_or_else(|| {
                CpnError::InvalidStrategy(format!("internal node at depth {depth} lacks \"no_click\""))
            })?;
            let click = obj.get("click").ok_or_else(|| {
                CpnError::InvalidStrategy(format!("internal node at depth {depth} lacks \"click\""))
            })?;
            Ok(StrategyNode::Internal {
                control,
                no_click: Box::new(parse_node(no_click, depth + 1, m, family, amplitude)?),
                click: Box::new(parse_node(click, depth + 1, m, family, amplitude)?),
            })
        } else {
            if !has_decision {
                return Err(CpnError::InvalidStrategy(format!(
                    "expected a leaf at depth {depth} (missing \"decision\")"
                )));
            }
            for key in obj.keys() {
                if !matches!(key.as_str(), "decision" | "joint_prob") {
                    return Err(CpnError::InvalidStrategy(format!("unknown key {key:?} in leaf")));
                }
            }
            let decision = obj
                .get("decision")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| CpnError::InvalidStrategy("non-integer \"decision\"".into()))?
                as usize;
            let joint_prob = obj
                .get("joint_prob")
                .and_then(|x| x.as_f64())
                .ok_or_else(|| CpnError::InvalidStrategy("non-numeric \"joint_prob\"".into()))?;
            Ok(StrategyNode::Leaf { decision, joint_prob })
        }
    }

    let root = parse_node(root_v, 0, m_slots, family, amplitude)?;
    StrategyTree::new(m_slots, family, n_bar, root)
}
