//! Names and bijections for the triangle tree and its covering rhombus tree.
//!
//! The infinite triangle tree has one vertex per binary word starting
//! `0`, `01`, `010` (for lengths one, two, and at least three); two vertices
//! are adjacent when one extends the other by a tail of shape `0 1*` or
//! `1 0*`. The tree is covered by copies of a four-vertex rhombus arranged
//! in an infinite ternary tree: each node has a left (`0`), forward (`1`)
//! and right (`2`) child glued along one of its sides. This module
//! implements the translations between the two trees: the covering map from
//! node corners to vertex words, the run-length code counting forward steps
//! between turns, the canonical node associated with each vertex, and the
//! per-node type that later selects one of twelve torus variables.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Corner of a rhombus node. `V0` is the base vertex, `(V0, V1)` the base
/// edge, `V2` sits above `V0`, and the diagonal runs `(V1, V2)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Corner {
    V0,
    V1,
    V2,
    V3,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::V0, Corner::V1, Corner::V2, Corner::V3];
}

/// Convention for the turn counter feeding the type function.
///
/// Under `Figure`, each turn advances the counter by one, or by two when
/// the preceding forward run is long (two or more steps) or the node is
/// mirrored (an odd number of right turns so far) and the run is nonempty.
/// This is the rule consistent with the worked vertex polynomials the
/// golden fixtures pin down, and the one under which the exhaustive
/// incidence certificate stays clean the deepest: rhombi that meet around
/// a shared vertex receive distinct variables, which the drawing
/// guarantees require. `Literal` advances the counter only past turns
/// carrying a preceding forward run or a right turn; it is kept selectable
/// so the published recurrence's behavior stays observable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum SConvention {
    #[default]
    Figure,
    Literal,
}

impl fmt::Display for SConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SConvention::Figure => f.write_str("figure"),
            SConvention::Literal => f.write_str("literal"),
        }
    }
}

/// Errors from parsing or relating names in the two trees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EncodingError {
    MalformedLabel(&'static str),
    MalformedPath(&'static str),
    MalformedCode(&'static str),
    /// The vertices `0` and `01` appear in no node as third or fourth corner.
    RootEdgeVertex,
    NotAnEdge,
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingError::MalformedLabel(why) => write!(f, "malformed vertex label: {why}"),
            EncodingError::MalformedPath(why) => write!(f, "malformed node path: {why}"),
            EncodingError::MalformedCode(why) => write!(f, "malformed qr code: {why}"),
            EncodingError::RootEdgeVertex => f.write_str("root edge vertices have no host node"),
            EncodingError::NotAnEdge => f.write_str("vertex pair is not a triangle-tree edge"),
        }
    }
}

impl core::error::Error for EncodingError {}

/// Binary word naming a triangle-tree vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    bits: Vec<u8>,
}

impl VertexLabel {
    /// Validates the prefix constraints: the word starts `0`, then `01`,
    /// then `010`.
    pub fn new(bits: Vec<u8>) -> Result<Self, EncodingError> {
        if bits.is_empty() {
            return Err(EncodingError::MalformedLabel("empty word"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(EncodingError::MalformedLabel("digit outside {0,1}"));
        }
        if bits[0] != 0 {
            return Err(EncodingError::MalformedLabel("first bit must be 0"));
        }
        if bits.len() >= 2 && bits[1] != 1 {
            return Err(EncodingError::MalformedLabel("second bit must be 1"));
        }
        if bits.len() >= 3 && bits[2] != 0 {
            return Err(EncodingError::MalformedLabel("third bit must be 0"));
        }
        Ok(VertexLabel { bits })
    }

    pub fn parse(s: &str) -> Result<Self, EncodingError> {
        let bits = s
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(EncodingError::MalformedLabel("digit outside {0,1}")),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        VertexLabel::new(bits)
    }

    /// The vertex `0`, one endpoint of the root edge.
    pub fn root() -> Self {
        VertexLabel { bits: vec![0] }
    }

    /// The vertex `01`, the other endpoint of the root edge.
    pub fn root_mate() -> Self {
        VertexLabel { bits: vec![0, 1] }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// True for the two root-edge endpoints `0` and `01`.
    pub fn is_root_edge_vertex(&self) -> bool {
        self.bits.len() <= 2
    }

    /// Appends one gluing digit. Valid on any label of length at least two.
    pub fn child(&self, bit: u8) -> Self {
        debug_assert!(bit <= 1 && self.bits.len() >= 2);
        let mut bits = self.bits.clone();
        bits.push(bit);
        VertexLabel { bits }
    }

    fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(VertexLabel::new(bits.clone()).is_ok());
        VertexLabel { bits }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexLabel({self})")
    }
}

impl core::str::FromStr for VertexLabel {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexLabel::parse(s)
    }
}

/// Ternary word naming a rhombus-tree node. The leading digit is always `1`
/// and marks the root; the remaining digits are arcs taken from it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath {
    trits: Vec<u8>,
}

impl NodePath {
    pub fn new(trits: Vec<u8>) -> Result<Self, EncodingError> {
        if trits.is_empty() {
            return Err(EncodingError::MalformedPath("empty path"));
        }
        if trits[0] != 1 {
            return Err(EncodingError::MalformedPath("path must start with 1"));
        }
        if trits.iter().any(|&t| t > 2) {
            return Err(EncodingError::MalformedPath("digit outside {0,1,2}"));
        }
        Ok(NodePath { trits })
    }

    pub fn parse(s: &str) -> Result<Self, EncodingError> {
        let trits = s
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                b'2' => Ok(2),
                _ => Err(EncodingError::MalformedPath("digit outside {0,1,2}")),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        NodePath::new(trits)
    }

    pub fn root() -> Self {
        NodePath { trits: vec![1] }
    }

    pub fn trits(&self) -> &[u8] {
        &self.trits
    }

    /// Path length, counting the root marker.
    pub fn depth(&self) -> usize {
        self.trits.len()
    }

    pub fn is_root(&self) -> bool {
        self.trits.len() == 1
    }

    /// The child reached through the arc labeled `arc`.
    pub fn child(&self, arc: u8) -> Self {
        debug_assert!(arc <= 2);
        let mut trits = self.trits.clone();
        trits.push(arc);
        NodePath { trits }
    }

    fn from_raw(trits: Vec<u8>) -> Self {
        debug_assert!(NodePath::new(trits.clone()).is_ok());
        NodePath { trits }
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &t in &self.trits {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodePath({self})")
    }
}

impl core::str::FromStr for NodePath {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodePath::parse(s)
    }
}

/// Adjacency in the triangle tree: one label extends the other and the tail
/// is `0` followed by ones, or `1` followed by zeros. Order-insensitive.
pub fn is_tstar_edge(a: &VertexLabel, b: &VertexLabel) -> bool {
    let (s, l) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if s.len() == l.len() || !l.bits().starts_with(s.bits()) {
        return false;
    }
    let tail = &l.bits()[s.len()..];
    match tail[0] {
        0 => tail[1..].iter().all(|&x| x == 1),
        _ => tail[1..].iter().all(|&x| x == 0),
    }
}

/// Orientation of a node: `0` if its rhombus keeps the root's left/right
/// sense, `1` if it is mirrored. Every right (`2`) arc flips it.
fn orientation(trits: &[u8]) -> u8 {
    (trits.iter().filter(|&&t| t == 2).count() % 2) as u8
}

fn label_rec(trits: &[u8], corner: Corner) -> Vec<u8> {
    if trits.len() == 1 {
        return match corner {
            Corner::V0 => vec![0],
            Corner::V1 => vec![0, 1],
            Corner::V2 => vec![0, 1, 0],
            Corner::V3 => vec![0, 1, 0, 1],
        };
    }
    let arc = trits[trits.len() - 1];
    let parent = &trits[..trits.len() - 1];
    // The base edge of the child is one of the parent's sides.
    let (u0, u1) = match arc {
        0 => (Corner::V0, Corner::V2),
        1 => (Corner::V2, Corner::V3),
        _ => (Corner::V1, Corner::V3),
    };
    match corner {
        Corner::V0 => label_rec(parent, u0),
        Corner::V1 => label_rec(parent, u1),
        Corner::V2 => {
            let mut w = label_rec(parent, u1);
            w.push(orientation(trits));
            w
        }
        Corner::V3 => {
            let mut w = label_rec(parent, u1);
            w.push(orientation(trits));
            w.push(1 - orientation(trits));
            w
        }
    }
}

/// The covering map: the triangle-tree vertex at a given corner of a node.
///
/// Defined recursively from the root corners `0`, `01`, `010`, `0101`; a
/// child inherits its base corners from the parent side it glues to and
/// extends the inherited upper corner by one digit. The appended digit is
/// the node's orientation, so that all five rhombus edges land on
/// triangle-tree edges; a mirrored node grows its corners with the digits
/// swapped.
pub fn covering_label(node: &NodePath, corner: Corner) -> VertexLabel {
    VertexLabel::from_raw(label_rec(node.trits(), corner))
}

/// Closed form of the covering map for the upper corners.
///
/// Walk the arcs and emit digits while tracking the orientation `s` (which
/// flips on every right arc): a left arc emits `s`, a forward arc emits
/// `1-s` then `s`, a right arc emits `1-s` twice. Prefixed with the root
/// apex `010` this is the `V2` corner; appending one more `1-s` gives `V3`.
/// In the unmirrored state this is the digit expansion `0 -> 0`, `1 -> 10`,
/// `2 -> 11`. Returns `None` for the base corners, which have no direct
/// formula.
pub fn covering_label_closed(node: &NodePath, corner: Corner) -> Option<VertexLabel> {
    if !matches!(corner, Corner::V2 | Corner::V3) {
        return None;
    }
    let mut bits = Vec::with_capacity(2 * node.depth() + 2);
    bits.extend_from_slice(&[0, 1, 0]);
    let mut s = 0u8;
    for &t in &node.trits()[1..] {
        match t {
            0 => bits.push(s),
            1 => {
                bits.push(1 - s);
                bits.push(s);
            }
            _ => {
                bits.push(1 - s);
                s = 1 - s;
                bits.push(s);
            }
        }
    }
    if corner == Corner::V3 {
        bits.push(1 - s);
    }
    Some(VertexLabel::from_raw(bits))
}

/// Forward/turn run-length code of a node path.
///
/// `q[i]` counts forward (`1`) steps between the `i-1`-th and `i`-th turns,
/// the root marker excluded; `rho[i]` is `1` when the `i`-th turn goes
/// right. The stored `q` always carries the trailing forward count, so
/// `q.len() == rho.len() + 1`; the abridged rendering drops a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QrCode {
    q: Vec<u32>,
    rho: Vec<u8>,
}

impl QrCode {
    /// Accepts `q` of length `m` (abridged, trailing zero implied) or
    /// `m + 1`, where `m = rho.len()`.
    pub fn new(q: Vec<u32>, rho: Vec<u8>) -> Result<Self, EncodingError> {
        if rho.iter().any(|&r| r > 1) {
            return Err(EncodingError::MalformedCode("turn digit outside {0,1}"));
        }
        let mut q = q;
        if q.len() == rho.len() {
            q.push(0);
        }
        if q.len() != rho.len() + 1 {
            return Err(EncodingError::MalformedCode(
                "forward counts must number the turns or one more",
            ));
        }
        Ok(QrCode { q, rho })
    }

    /// Number of turns.
    pub fn m(&self) -> usize {
        self.rho.len()
    }

    /// Forward counts in full form, length `m + 1`.
    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn rho(&self) -> &[u8] {
        &self.rho
    }

    /// Forward steps after the last turn.
    pub fn trailing(&self) -> u32 {
        self.q[self.rho.len()]
    }

    /// A code is proper when the trailing forward count is zero and either
    /// there is exactly one turn or the last inter-turn count is positive.
    /// Proper codes are in bijection with triangle-tree vertices.
    pub fn is_proper(&self) -> bool {
        let m = self.m();
        self.trailing() == 0 && m >= 1 && (m == 1 || self.q[m - 1] > 0)
    }

    /// `q` with a trailing zero dropped, mirroring the written form.
    pub fn abridged_q(&self) -> &[u32] {
        if self.trailing() == 0 {
            &self.q[..self.q.len() - 1]
        } else {
            &self.q
        }
    }
}

impl fmt::Display for QrCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("((")?;
        for (i, v) in self.abridged_q().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("),(")?;
        for (i, v) in self.rho.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("))")
    }
}

impl fmt::Debug for QrCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QrCode{self}")
    }
}

pub fn qr_encode(node: &NodePath) -> QrCode {
    let mut q = Vec::new();
    let mut rho = Vec::new();
    let mut run = 0u32;
    for &t in &node.trits()[1..] {
        match t {
            1 => run += 1,
            turn => {
                q.push(run);
                rho.push(if turn == 2 { 1 } else { 0 });
                run = 0;
            }
        }
    }
    q.push(run);
    QrCode { q, rho }
}

/// Inverse of [`qr_encode`]: walk `q[0]` steps forward, turn per `rho[0]`,
/// and so on, finishing with the trailing forward steps.
pub fn qr_decode(code: &QrCode) -> NodePath {
    let mut trits = vec![1u8];
    for (i, &r) in code.rho.iter().enumerate() {
        trits.extend(core::iter::repeat(1).take(code.q[i] as usize));
        trits.push(if r == 1 { 2 } else { 0 });
    }
    trits.extend(core::iter::repeat(1).take(code.trailing() as usize));
    NodePath::from_raw(trits)
}

/// The unique node whose `V2` or `V3` corner is the given vertex.
///
/// Inverts the closed form: the digits after the root apex `010` are parsed
/// with the orientation-tracking prefix code (`s -> left`, `(1-s) s ->
/// forward`, `(1-s)(1-s) -> right` flipping `s`; in the unmirrored state
/// that is `0`, `10`, `11`). A complete parse means corner `V2`, a dangling
/// final digit means `V3`. Fails only for the two root-edge vertices, which
/// occur solely as base corners.
pub fn host_node_of(v: &VertexLabel) -> Result<(NodePath, Corner), EncodingError> {
    if v.is_root_edge_vertex() {
        return Err(EncodingError::RootEdgeVertex);
    }
    let bits = v.bits();
    let mut trits = alloc::vec![1u8];
    let mut s = 0u8;
    let mut i = 3;
    while i < bits.len() {
        if bits[i] == s {
            trits.push(0);
            i += 1;
        } else if i + 1 < bits.len() {
            if bits[i + 1] == s {
                trits.push(1);
            } else {
                trits.push(2);
                s = 1 - s;
            }
            i += 2;
        } else {
            return Ok((NodePath::from_raw(trits), Corner::V3));
        }
    }
    Ok((NodePath::from_raw(trits), Corner::V2))
}

/// The canonical node with a proper code whose base vertex is `v`.
///
/// From the host node one more forward step followed by a left or right
/// turn (for `V2` and `V3` respectively) lands on it; the root-edge
/// vertices map to the two turn children of the root.
pub fn proper_node_of(v: &VertexLabel) -> NodePath {
    if v.is_root_edge_vertex() {
        let arc = if v.len() == 1 { 0 } else { 2 };
        return NodePath::root().child(arc);
    }
    let (node, corner) = host_node_of(v).expect("non-root vertex has a host");
    let arc = if corner == Corner::V2 { 0 } else { 2 };
    node.child(1).child(arc)
}

/// Index of one of the twelve torus variables: parities of the last forward
/// count and turn direction, and the run counter modulo three.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TypeIndex {
    q: u8,
    r: u8,
    s: u8,
}

impl TypeIndex {
    pub const COUNT: usize = 12;

    pub fn new(q: u8, r: u8, s: u8) -> Option<Self> {
        (q <= 1 && r <= 1 && s <= 2).then_some(TypeIndex { q, r, s })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn s(&self) -> u8 {
        self.s
    }

    /// Position in the fixed enumeration of all twelve indices.
    pub fn dense(&self) -> usize {
        self.q as usize * 6 + self.r as usize * 3 + self.s as usize
    }

    pub fn from_dense(i: usize) -> Option<Self> {
        (i < Self::COUNT).then(|| TypeIndex {
            q: (i / 6) as u8,
            r: (i / 3 % 2) as u8,
            s: (i % 3) as u8,
        })
    }

    pub fn all() -> impl Iterator<Item = TypeIndex> {
        (0..Self::COUNT).map(|i| TypeIndex::from_dense(i).unwrap())
    }
}

impl fmt::Display for TypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.q, self.r, self.s)
    }
}

/// Types of the nodes encoded by each code prefix, from the root (index 0,
/// always type `0,0,0`) through the full code (index `m`).
pub fn prefix_types(code: &QrCode, conv: SConvention) -> Vec<TypeIndex> {
    let q = code.q();
    let rho = code.rho();
    let mut out = Vec::with_capacity(code.m() + 1);
    out.push(TypeIndex { q: 0, r: 0, s: 0 });
    let mut s = 0u32;
    let mut mirror = false;
    for i in 1..=code.m() {
        let step = match conv {
            SConvention::Figure => {
                let long_run = if mirror { q[i - 1] >= 1 } else { q[i - 1] >= 2 };
                1 + u32::from(long_run)
            }
            SConvention::Literal => {
                u32::from((i >= 2 && q[i - 2] > 0) || rho[i - 1] == 1)
            }
        };
        s += step;
        mirror ^= rho[i - 1] == 1;
        out.push(TypeIndex {
            q: (q[i - 1] % 2) as u8,
            r: rho[i - 1],
            s: (s % 3) as u8,
        });
    }
    out
}

/// The type of a node: which torus variable sets its rhombus angle.
///
/// Trailing forward steps do not contribute, so a forward child keeps its
/// parent's type.
pub fn type_of(node: &NodePath, conv: SConvention) -> TypeIndex {
    let code = qr_encode(node);
    *prefix_types(&code, conv)
        .last()
        .expect("prefix type list is nonempty")
}

/// Role a triangle-tree edge plays in the rhombus covering.
///
/// Every edge except the root base is a left side (`V0`,`V2`), far side
/// (`V2`,`V3`), right side (`V1`,`V3`) or diagonal (`V1`,`V2`) of exactly
/// one node. The three side roles and the root base have unit image; the
/// diagonal's image has length `|x - 1|` for the node's type variable `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EdgeRole {
    RootBase,
    LeftSide(NodePath),
    FarSide(NodePath),
    RightSide(NodePath),
    Diagonal(NodePath),
}

pub fn edge_role(a: &VertexLabel, b: &VertexLabel) -> Result<EdgeRole, EncodingError> {
    if !is_tstar_edge(a, b) {
        return Err(EncodingError::NotAnEdge);
    }
    let (s, l) = if a.len() < b.len() { (a, b) } else { (b, a) };
    if s.is_root_edge_vertex() && l.is_root_edge_vertex() {
        return Ok(EdgeRole::RootBase);
    }
    let (node, corner) = host_node_of(l)?;
    let role = match corner {
        Corner::V2 => {
            if *s == covering_label(&node, Corner::V0) {
                EdgeRole::LeftSide(node)
            } else {
                debug_assert_eq!(*s, covering_label(&node, Corner::V1));
                EdgeRole::Diagonal(node)
            }
        }
        Corner::V3 => {
            if *s == covering_label(&node, Corner::V2) {
                EdgeRole::FarSide(node)
            } else {
                debug_assert_eq!(*s, covering_label(&node, Corner::V1));
                EdgeRole::RightSide(node)
            }
        }
        _ => unreachable!("host corner is V2 or V3"),
    };
    Ok(role)
}

/// Length class of an edge image: unit (before scaling) or the diagonal of
/// a type-`i` rhombus, of length `|x_i - 1|`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeClass {
    Unit,
    Diagonal(TypeIndex),
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeClass::Unit => f.write_str("unit"),
            EdgeClass::Diagonal(t) => write!(f, "diagonal[{t}]"),
        }
    }
}

pub fn edge_class(
    a: &VertexLabel,
    b: &VertexLabel,
    conv: SConvention,
) -> Result<EdgeClass, EncodingError> {
    Ok(match edge_role(a, b)? {
        EdgeRole::Diagonal(node) => EdgeClass::Diagonal(type_of(&node, conv)),
        _ => EdgeClass::Unit,
    })
}
