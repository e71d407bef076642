//! Periodic spacetime simplicial mesh.
//!
//! The spatial mesh is an `N^3` arrangement of unit-cube building blocks on
//! the 3-torus `[0,1)^3`, each cube split into the six Kuhn tetrahedra that
//! share the interior diagonal from `(0,0,0)` to `(1,1,1)`. Every entity is a
//! lattice translate of one of a handful of canonical types rooted at a cube
//! origin:
//!
//! * 7 edge types per cube: 3 axis edges, 3 face diagonals, 1 body diagonal;
//! * 12 face types per cube: 6 boundary half-squares, 6 interior triangles
//!   containing the body diagonal;
//! * 6 tetrahedron types, one per monotone lattice path (axis permutation).
//!
//! Entity ids are `root * PER_CUBE + type`, deterministic and translation
//! invariant. Edges are oriented from their root (componentwise smaller
//! endpoint), faces by the componentwise order of their vertices; the
//! distinguished point of every face is its first canonical vertex. The
//! spacetime mesh replicates the spatial complex at `N_t` uniformly spaced
//! time nodes with periodic wrap; temporal edges, temporal quadrilateral
//! faces and prisms are indexed per slab.

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::io::Write;

/// Entity kinds of the spacetime complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Vertex,
    SpatialEdge,
    TemporalEdge,
    SpatialFace,
    TemporalFace,
    Tetrahedron,
    Prism,
}

/// Reference to one entity: its kind, spatial index and time-node index.
///
/// Temporal edges are indexed by their spatial vertex, temporal faces by
/// their spatial edge, prisms by their tetrahedron; `time` names the slab
/// `[tau, tau + dt]` for slab-like entities and the node for node-like ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntityRef {
    pub kind: EntityKind,
    pub index: u32,
    pub time: u32,
}

impl EntityRef {
    pub fn new(kind: EntityKind, index: u32, time: u32) -> Self {
        EntityRef { kind, index, time }
    }
}

/// Oriented edge of the spatial complex, oriented from `a` (its root) to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    /// direction type 0..7: x, y, z, yz-, xz-, xy-diagonal, body diagonal
    pub etype: u8,
}

/// Oriented pointed face. `verts` are in canonical (componentwise) order;
/// the distinguished point is `verts[0]`. `edges` lists the boundary cycle
/// `v0 -> v1 -> v2 -> v0` as `(edge id, sign)` with sign relating the cycle
/// direction to the stored edge orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub verts: [u32; 3],
    pub edges: [(u32, i8); 3],
    /// root cube (equals `verts[0]`)
    pub root: u32,
    pub ftype: u8,
}

/// One edge slot of a tetrahedron: global edge id plus the local vertex
/// pair `(a, b)` in the edge's stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TetEdge {
    pub id: u32,
    pub a: u8,
    pub b: u8,
}

/// One face slot of a tetrahedron: global face id, the local index of the
/// face's distinguished point, the ordered local triple matching the face's
/// canonical vertex order, and the induced boundary-orientation sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TetFace {
    pub id: u32,
    pub base_local: u8,
    pub locals: [u8; 3],
    pub sign: i8,
}

/// Tetrahedron with positively oriented stored vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tet {
    pub verts: [u32; 4],
    pub edges: [TetEdge; 6],
    pub faces: [TetFace; 4],
    /// local pair -> edge slot lookup (diagonal entries unused)
    pub k4: [[u8; 4]; 4],
    pub cube: u32,
    pub ttype: u8,
}

/// Canonical per-cube tables of the Kuhn triangulation, derived once from
/// the six monotone lattice paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellTables {
    /// edge direction per type
    pub edge_dirs: [[u8; 3]; 7],
    /// per face type: offsets of the three vertices from the root cube
    pub face_offsets: [[[u8; 3]; 3]; 12],
    /// per tet type: offsets of the four stored vertices
    pub tet_offsets: [[[u8; 3]; 4]; 6],
}

/// Periodic tetrahedral mesh of the unit 3-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMesh {
    pub n: usize,
    pub h: f64,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub tets: Vec<Tet>,
    pub tables: CellTables,
    /// tets incident to each vertex
    pub vert_tets: Vec<Vec<u32>>,
    /// tets incident to each edge
    pub edge_tets: Vec<Vec<u32>>,
    /// the two tets incident to each face
    pub face_tets: Vec<[u32; 2]>,
}

/// Spatial mesh replicated at `n_t` uniform time nodes, periodic in time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeMesh {
    pub spatial: SpatialMesh,
    pub n_t: usize,
    pub dt: f64,
}

const EDGE_DIRS: [[u8; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
];

/// The six monotone paths (axis visit orders) through the unit cube.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn perm_parity(p: &[usize; 3]) -> i8 {
    let mut inv = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn leq(a: &[u8; 3], b: &[u8; 3]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]
}

fn sub3(a: &[u8; 3], b: &[u8; 3]) -> [u8; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn edge_type_of(dir: &[u8; 3]) -> u8 {
    EDGE_DIRS
        .iter()
        .position(|d| d == dir)
        .expect("direction must be one of the seven canonical edge types") as u8
}

fn parity_of_reorder(from: &[u8; 3], to: &[u8; 3]) -> i8 {
    // parity of the permutation carrying `from` to `to` (both triples of
    // distinct local indices)
    let mut f = *from;
    let mut sign = 1i8;
    for i in 0..3 {
        if f[i] != to[i] {
            let j = (i + 1..3).find(|&j| f[j] == to[i]).unwrap();
            f.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

struct TetProto {
    offsets: [[u8; 3]; 4],
    edges: [(u8, u8, u8, [u8; 3]); 6], // (local a, local b, etype, root offset)
    faces: [(u8, [u8; 3], [u8; 3], [u8; 3], i8); 4], // (ftype, locals, root off, rel key unused, sign)
}

fn build_prototypes() -> (CellTables, Vec<TetProto>) {
    let mut face_key_to_type: BTreeMap<[[u8; 3]; 2], u8> = BTreeMap::new();
    let mut protos_raw = Vec::new();

    for perm in PERMS.iter() {
        let e = |k: usize| -> [u8; 3] {
            let mut v = [0u8; 3];
            v[k] = 1;
            v
        };
        let w0 = [0u8; 3];
        let w1 = e(perm[0]);
        let w2 = [
            w1[0] + e(perm[1])[0],
            w1[1] + e(perm[1])[1],
            w1[2] + e(perm[1])[2],
        ];
        let w3 = [1u8, 1, 1];
        let mut offsets = [w0, w1, w2, w3];
        if perm_parity(perm) < 0 {
            offsets.swap(0, 1);
        }

        // edge slots over local pairs in fixed order
        let pair_order = [(0u8, 1u8), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut edges = [(0u8, 0u8, 0u8, [0u8; 3]); 6];
        for (s, &(i, j)) in pair_order.iter().enumerate() {
            let (oi, oj) = (offsets[i as usize], offsets[j as usize]);
            let (a, b, root, dir) = if leq(&oi, &oj) {
                (i, j, oi, sub3(&oj, &oi))
            } else {
                (j, i, oj, sub3(&oi, &oj))
            };
            edges[s] = (a, b, edge_type_of(&dir), root);
        }

        // face slots: face m omits local vertex m
        let mut faces = [(0u8, [0u8; 3], [0u8; 3], [0u8; 3], 0i8); 4];
        for m in 0..4usize {
            let ascending: Vec<u8> = (0..4u8).filter(|&l| l as usize != m).collect();
            let mut canon = ascending.clone();
            canon.sort_by(|&p, &q| {
                let (op, oq) = (offsets[p as usize], offsets[q as usize]);
                if op == oq {
                    std::cmp::Ordering::Equal
                } else if leq(&op, &oq) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            let root = offsets[canon[0] as usize];
            let rel = [
                sub3(&offsets[canon[1] as usize], &root),
                sub3(&offsets[canon[2] as usize], &root),
            ];
            let next_type = face_key_to_type.len() as u8;
            let ftype = *face_key_to_type.entry(rel).or_insert(next_type);
            let m_sign = if m % 2 == 0 { 1i8 } else { -1 };
            let sign = m_sign
                * parity_of_reorder(
                    &[ascending[0], ascending[1], ascending[2]],
                    &[canon[0], canon[1], canon[2]],
                );
            faces[m] = (ftype, [canon[0], canon[1], canon[2]], root, [0; 3], sign);
        }

        protos_raw.push(TetProto {
            offsets,
            edges,
            faces,
        });
    }

    assert_eq!(face_key_to_type.len(), 12, "Kuhn cube must have 12 face types");

    // remap face types to the deterministic BTreeMap order
    let mut remap = [0u8; 12];
    for (sorted_idx, (_, old)) in face_key_to_type.iter().enumerate() {
        remap[*old as usize] = sorted_idx as u8;
    }
    let mut face_offsets = [[[0u8; 3]; 3]; 12];
    for (key, old) in face_key_to_type.iter() {
        let t = remap[*old as usize] as usize;
        face_offsets[t] = [[0; 3], key[0], key[1]];
    }
    for p in protos_raw.iter_mut() {
        for f in p.faces.iter_mut() {
            f.0 = remap[f.0 as usize];
        }
    }

    let mut tet_offsets = [[[0u8; 3]; 4]; 6];
    for (i, p) in protos_raw.iter().enumerate() {
        tet_offsets[i] = p.offsets;
    }

    (
        CellTables {
            edge_dirs: EDGE_DIRS,
            face_offsets,
            tet_offsets,
        },
        protos_raw,
    )
}

impl SpatialMesh {
    pub fn vertex_count(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    pub fn vertex_coords(&self, v: u32) -> [usize; 3] {
        let n = self.n;
        let v = v as usize;
        [v % n, (v / n) % n, v / (n * n)]
    }

    pub fn vertex_id(&self, x: usize, y: usize, z: usize) -> u32 {
        let n = self.n;
        ((x % n) + n * ((y % n) + n * (z % n))) as u32
    }

    fn wrap_offset(&self, v: u32, off: &[u8; 3]) -> u32 {
        let [x, y, z] = self.vertex_coords(v);
        self.vertex_id(x + off[0] as usize, y + off[1] as usize, z + off[2] as usize)
    }

    /// Geometric position of a vertex (unwrapped base point).
    pub fn vertex_pos(&self, v: u32) -> [f64; 3] {
        let [x, y, z] = self.vertex_coords(v);
        [x as f64 * self.h, y as f64 * self.h, z as f64 * self.h]
    }

    /// Geometric endpoints of an edge, unwrapped across the periodic seam.
    pub fn edge_endpoints_geo(&self, e: u32) -> ([f64; 3], [f64; 3]) {
        let edge = &self.edges[e as usize];
        let p = self.vertex_pos(edge.a);
        let d = self.tables.edge_dirs[edge.etype as usize];
        (
            p,
            [
                p[0] + d[0] as f64 * self.h,
                p[1] + d[1] as f64 * self.h,
                p[2] + d[2] as f64 * self.h,
            ],
        )
    }

    /// Geometric corner positions of a face, unwrapped from its root.
    pub fn face_vertices_geo(&self, f: u32) -> [[f64; 3]; 3] {
        let face = &self.faces[f as usize];
        let p = self.vertex_pos(face.root);
        let offs = self.tables.face_offsets[face.ftype as usize];
        let mut out = [[0.0; 3]; 3];
        for (i, o) in offs.iter().enumerate() {
            out[i] = [
                p[0] + o[0] as f64 * self.h,
                p[1] + o[1] as f64 * self.h,
                p[2] + o[2] as f64 * self.h,
            ];
        }
        out
    }

    /// Geometric corner positions of a tetrahedron, unwrapped from its cube.
    pub fn tet_vertices_geo(&self, t: u32) -> [[f64; 3]; 4] {
        let tet = &self.tets[t as usize];
        let p = self.vertex_pos(tet.cube);
        let offs = self.tables.tet_offsets[tet.ttype as usize];
        let mut out = [[0.0; 3]; 4];
        for (i, o) in offs.iter().enumerate() {
            out[i] = [
                p[0] + o[0] as f64 * self.h,
                p[1] + o[1] as f64 * self.h,
                p[2] + o[2] as f64 * self.h,
            ];
        }
        out
    }
}

/// Build the periodic Freudenthal/Kuhn mesh with `n` cubes per side.
pub fn build_spatial(n: usize) -> Result<SpatialMesh> {
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    let (tables, protos) = build_prototypes();
    let nv = n * n * n;
    let h = 1.0 / n as f64;

    // temporary mesh shell for index arithmetic
    let mut mesh = SpatialMesh {
        n,
        h,
        edges: Vec::with_capacity(7 * nv),
        faces: Vec::with_capacity(12 * nv),
        tets: Vec::with_capacity(6 * nv),
        tables,
        vert_tets: vec![Vec::new(); nv],
        edge_tets: vec![Vec::new(); 7 * nv],
        face_tets: Vec::new(),
    };

    for v in 0..nv as u32 {
        for (t, dir) in EDGE_DIRS.iter().enumerate() {
            mesh.edges.push(Edge {
                a: v,
                b: mesh.wrap_offset(v, dir),
                etype: t as u8,
            });
        }
    }

    for c in 0..nv as u32 {
        for (t, offs) in mesh.tables.face_offsets.iter().enumerate() {
            let verts = [
                mesh.wrap_offset(c, &offs[0]),
                mesh.wrap_offset(c, &offs[1]),
                mesh.wrap_offset(c, &offs[2]),
            ];
            // boundary cycle v0 -> v1 -> v2 -> v0; legs 1,2 run with the
            // stored edge orientation, the closing leg against it
            let leg = |from: usize, to: usize, sign: i8| -> (u32, i8) {
                let (of, ot) = (offs[from], offs[to]);
                let (root_off, dir) = if leq(&of, &ot) {
                    (of, sub3(&ot, &of))
                } else {
                    (ot, sub3(&of, &ot))
                };
                let root = mesh.wrap_offset(c, &root_off);
                (root * 7 + edge_type_of(&dir) as u32, sign)
            };
            let edges = [leg(0, 1, 1), leg(1, 2, 1), leg(2, 0, -1)];
            mesh.faces.push(Face {
                verts,
                edges,
                root: c,
                ftype: t as u8,
            });
        }
    }

    let mut face_tets_acc: Vec<Vec<u32>> = vec![Vec::new(); 12 * nv];
    for c in 0..nv as u32 {
        for (ttype, proto) in protos.iter().enumerate() {
            let tid = mesh.tets.len() as u32;
            let verts = [
                mesh.wrap_offset(c, &proto.offsets[0]),
                mesh.wrap_offset(c, &proto.offsets[1]),
                mesh.wrap_offset(c, &proto.offsets[2]),
                mesh.wrap_offset(c, &proto.offsets[3]),
            ];
            let mut edges = [TetEdge { id: 0, a: 0, b: 0 }; 6];
            let mut k4 = [[u8::MAX; 4]; 4];
            for (s, &(a, b, etype, root_off)) in proto.edges.iter().enumerate() {
                let root = mesh.wrap_offset(c, &root_off);
                let id = root * 7 + etype as u32;
                edges[s] = TetEdge { id, a, b };
                k4[a as usize][b as usize] = s as u8;
                k4[b as usize][a as usize] = s as u8;
            }
            let mut faces = [TetFace {
                id: 0,
                base_local: 0,
                locals: [0; 3],
                sign: 0,
            }; 4];
            for (m, &(ftype, locals, root_off, _, sign)) in proto.faces.iter().enumerate() {
                let root = mesh.wrap_offset(c, &root_off);
                let id = root * 12 + ftype as u32;
                faces[m] = TetFace {
                    id,
                    base_local: locals[0],
                    locals,
                    sign,
                };
                face_tets_acc[id as usize].push(tid);
            }
            for &v in verts.iter() {
                mesh.vert_tets[v as usize].push(tid);
            }
            for e in edges.iter() {
                mesh.edge_tets[e.id as usize].push(tid);
            }
            mesh.tets.push(Tet {
                verts,
                edges,
                faces,
                k4,
                cube: c,
                ttype: ttype as u8,
            });
        }
    }

    mesh.face_tets = face_tets_acc
        .into_iter()
        .map(|v| {
            assert_eq!(v.len(), 2, "every face must belong to exactly two tets");
            [v[0], v[1]]
        })
        .collect();

    Ok(mesh)
}

/// Build the spacetime complex: the spatial mesh replicated at `n_t` time
/// nodes with time step `1 / n_t`, periodic in time.
pub fn build_spacetime(n: usize, n_t: usize) -> Result<SpacetimeMesh> {
    if n_t < 2 {
        return Err(Error::InvalidSize(n_t));
    }
    Ok(SpacetimeMesh {
        spatial: build_spatial(n)?,
        n_t,
        dt: 1.0 / n_t as f64,
    })
}

impl SpacetimeMesh {
    pub fn wrap_time(&self, t: i64) -> u32 {
        t.rem_euclid(self.n_t as i64) as u32
    }

    pub fn time_node(&self, tau: u32) -> f64 {
        tau as f64 * self.dt
    }

    /// Boundary of a face-like or tet entity as `(entity, sign)` pairs.
    ///
    /// * spatial face: its boundary cycle as three spatial edges;
    /// * temporal face over edge `e = (i, j)` in slab `tau`: the cycle
    ///   `i_tau -> j_tau -> j_tau' -> i_tau'` as four edges
    ///   (spatial at `tau`, temporal at `j`, spatial at `tau + dt` reversed,
    ///   temporal at `i` reversed);
    /// * tetrahedron: its four faces with induced orientation signs.
    ///
    /// Vertices, edges and prisms have no stored single-step boundary here
    /// and yield `InvalidRef` (the prism boundary complex is a derived
    /// identity over tet and temporal-face incidences).
    pub fn incidence(&self, r: &EntityRef) -> Result<Vec<(EntityRef, i8)>> {
        let s = &self.spatial;
        if r.time as usize >= self.n_t {
            return Err(Error::InvalidRef);
        }
        match r.kind {
            EntityKind::SpatialFace => {
                let f = s.faces.get(r.index as usize).ok_or(Error::InvalidRef)?;
                Ok(f.edges
                    .iter()
                    .map(|&(e, sg)| (EntityRef::new(EntityKind::SpatialEdge, e, r.time), sg))
                    .collect())
            }
            EntityKind::TemporalFace => {
                let e = s.edges.get(r.index as usize).ok_or(Error::InvalidRef)?;
                let tau = r.time;
                let tau1 = self.wrap_time(tau as i64 + 1);
                Ok(vec![
                    (EntityRef::new(EntityKind::SpatialEdge, r.index, tau), 1),
                    (EntityRef::new(EntityKind::TemporalEdge, e.b, tau), 1),
                    (EntityRef::new(EntityKind::SpatialEdge, r.index, tau1), -1),
                    (EntityRef::new(EntityKind::TemporalEdge, e.a, tau), -1),
                ])
            }
            EntityKind::Tetrahedron => {
                let t = s.tets.get(r.index as usize).ok_or(Error::InvalidRef)?;
                Ok(t.faces
                    .iter()
                    .map(|tf| {
                        (
                            EntityRef::new(EntityKind::SpatialFace, tf.id, r.time),
                            tf.sign,
                        )
                    })
                    .collect())
            }
            _ => Err(Error::InvalidRef),
        }
    }

    /// The mesh edge joining two vertices, oriented `v -> w`.
    ///
    /// Valid for distinct vertices of a common tetrahedron at the same time
    /// node, or time-adjacent copies of one spatial vertex. `v == w` returns
    /// the identity transport marker. The sign says whether the stored dof
    /// must be negated to follow `v -> w`.
    pub fn connecting_edge(&self, v: &EntityRef, w: &EntityRef) -> Result<Transport> {
        if v.kind != EntityKind::Vertex || w.kind != EntityKind::Vertex {
            return Err(Error::InvalidRef);
        }
        let s = &self.spatial;
        if v.index as usize >= s.vertex_count()
            || w.index as usize >= s.vertex_count()
            || v.time as usize >= self.n_t
            || w.time as usize >= self.n_t
        {
            return Err(Error::InvalidRef);
        }
        if v == w {
            return Ok(Transport::Identity);
        }
        if v.index == w.index {
            // time-adjacent copies of one spatial vertex
            if self.wrap_time(v.time as i64 + 1) == w.time {
                return Ok(Transport::Link {
                    edge: EntityRef::new(EntityKind::TemporalEdge, v.index, v.time),
                    sign: 1,
                });
            }
            if self.wrap_time(w.time as i64 + 1) == v.time {
                return Ok(Transport::Link {
                    edge: EntityRef::new(EntityKind::TemporalEdge, v.index, w.time),
                    sign: -1,
                });
            }
            return Err(Error::NotAdjacent);
        }
        if v.time != w.time {
            return Err(Error::NotAdjacent);
        }
        // lowest-indexed common tetrahedron decides the edge
        let tv = &s.vert_tets[v.index as usize];
        let tw = &s.vert_tets[w.index as usize];
        let common = tv.iter().filter(|t| tw.contains(t)).min();
        let Some(&tid) = common else {
            return Err(Error::NotAdjacent);
        };
        let tet = &s.tets[tid as usize];
        let lv = tet.verts.iter().position(|&x| x == v.index).unwrap();
        let lw = tet.verts.iter().position(|&x| x == w.index).unwrap();
        let slot = tet.k4[lv][lw];
        let te = tet.edges[slot as usize];
        let sign = if (te.a as usize, te.b as usize) == (lv, lw) {
            1
        } else {
            -1
        };
        Ok(Transport::Link {
            edge: EntityRef::new(EntityKind::SpatialEdge, te.id, v.time),
            sign,
        })
    }

    /// Plain-text entity table for debugging: one line per entity with kind,
    /// indices and orientation data. Spatial entities only; temporal entities
    /// are implied by the slab replication.
    pub fn dump<W: Write>(&self, w: &mut W) -> Result<()> {
        let s = &self.spatial;
        writeln!(w, "mesh n={} nt={} h={:.17e} dt={:.17e}", s.n, self.n_t, s.h, self.dt)?;
        for v in 0..s.vertex_count() as u32 {
            let p = s.vertex_pos(v);
            writeln!(w, "vertex {} {:.17e} {:.17e} {:.17e}", v, p[0], p[1], p[2])?;
        }
        for (i, e) in s.edges.iter().enumerate() {
            writeln!(w, "edge {} {} {} type {}", i, e.a, e.b, e.etype)?;
        }
        for (i, f) in s.faces.iter().enumerate() {
            writeln!(
                w,
                "face {} verts {} {} {} edges {}{:+} {}{:+} {}{:+}",
                i,
                f.verts[0],
                f.verts[1],
                f.verts[2],
                f.edges[0].0,
                f.edges[0].1,
                f.edges[1].0,
                f.edges[1].1,
                f.edges[2].0,
                f.edges[2].1
            )?;
        }
        for (i, t) in s.tets.iter().enumerate() {
            writeln!(
                w,
                "tet {} verts {} {} {} {} faces {}{:+} {}{:+} {}{:+} {}{:+}",
                i,
                t.verts[0],
                t.verts[1],
                t.verts[2],
                t.verts[3],
                t.faces[0].id,
                t.faces[0].sign,
                t.faces[1].id,
                t.faces[1].sign,
                t.faces[2].id,
                t.faces[2].sign,
                t.faces[3].id,
                t.faces[3].sign
            )?;
        }
        Ok(())
    }
}

/// Result of a transport query between two vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transport {
    /// Coincident vertices: transport is the identity.
    Identity,
    /// Transport along a single mesh edge; `sign < 0` means the stored dof
    /// of `edge` must be negated to follow the requested direction.
    Link { edge: EntityRef, sign: i8 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashMap};

    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn tet_volume(geo: &[[f64; 3]; 4]) -> f64 {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                m[i][k] = geo[i + 1][k] - geo[0][k];
            }
        }
        det3(m) / 6.0
    }

    #[test]
    fn rejects_too_small() {
        assert!(matches!(build_spatial(1), Err(Error::InvalidSize(1))));
        assert!(matches!(build_spacetime(4, 1), Err(Error::InvalidSize(1))));
    }

    #[test]
    fn counts_n2_and_euler_characteristic() {
        let m = build_spatial(2).unwrap();
        assert_eq!(m.vertex_count(), 8);
        assert_eq!(m.edge_count(), 56);
        assert_eq!(m.face_count(), 96);
        assert_eq!(m.tet_count(), 48);
        let euler = 8i64 - 56 + 96 - 48;
        assert_eq!(euler, 0);

        // independent enumeration: collect (root, type) keys from the tets
        // themselves and check they fill the id ranges exactly
        let mut edge_ids = BTreeSet::new();
        let mut face_ids = BTreeSet::new();
        for t in &m.tets {
            for e in &t.edges {
                edge_ids.insert(e.id);
            }
            for f in &t.faces {
                face_ids.insert(f.id);
            }
        }
        assert_eq!(edge_ids.len(), 56);
        assert_eq!(face_ids.len(), 96);
        assert_eq!(*edge_ids.iter().max().unwrap(), 55);
        assert_eq!(*face_ids.iter().max().unwrap(), 95);
    }

    #[test]
    fn counts_n4() {
        let m = build_spatial(4).unwrap();
        assert_eq!(m.tet_count(), 6 * 64);
        assert_eq!(m.edge_count(), 7 * 64);
        assert_eq!(m.face_count(), 12 * 64);
    }

    #[test]
    fn tet_volumes_are_positive_sixths() {
        for n in [2usize, 3] {
            let m = build_spatial(n).unwrap();
            let expect = m.h * m.h * m.h / 6.0;
            let mut total = 0.0;
            for t in 0..m.tet_count() as u32 {
                let vol = tet_volume(&m.tet_vertices_geo(t));
                assert!(
                    (vol - expect).abs() < 1e-15,
                    "tet {t} volume {vol} expected {expect}"
                );
                total += vol;
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn every_face_in_exactly_two_tets_with_opposite_orientation() {
        let m = build_spatial(2).unwrap();
        for (fid, pair) in m.face_tets.iter().enumerate() {
            let sgn = |tid: u32| -> i8 {
                m.tets[tid as usize]
                    .faces
                    .iter()
                    .find(|tf| tf.id == fid as u32)
                    .unwrap()
                    .sign
            };
            assert_eq!(
                sgn(pair[0]) + sgn(pair[1]),
                0,
                "face {fid} must get opposite induced orientations"
            );
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes_for_tets() {
        let m = build_spatial(2).unwrap();
        for t in &m.tets {
            let mut edge_acc: HashMap<u32, i32> = HashMap::new();
            for tf in &t.faces {
                let face = &m.faces[tf.id as usize];
                for &(e, sg) in &face.edges {
                    *edge_acc.entry(e).or_insert(0) += (tf.sign * sg) as i32;
                }
            }
            for (e, acc) in edge_acc {
                assert_eq!(acc, 0, "edge {e} does not cancel in del del");
            }
        }
    }

    #[test]
    fn prism_boundary_complex_cancels() {
        // sum over the five 3-cells of a prism T x I of their 2-boundaries:
        // side slabs f_i x I carry the tet face signs, top/bottom tets enter
        // with -/+; everything must cancel.
        let m = build_spacetime(2, 2).unwrap();
        let s = &m.spatial;
        for (tid, t) in s.tets.iter().enumerate() {
            let _ = tid;
            for tau in 0..m.n_t as u32 {
                let tau1 = m.wrap_time(tau as i64 + 1);
                let mut acc: HashMap<(EntityKind, u32, u32), i32> = HashMap::new();
                let mut push = |r: EntityRef, s: i32| {
                    *acc.entry((r.kind, r.index, r.time)).or_insert(0) += s;
                };
                for tf in &t.faces {
                    // boundary of the side slab f x I
                    let fref = EntityRef::new(EntityKind::SpatialFace, tf.id, tau);
                    for (e, sg) in m.incidence(&fref).unwrap() {
                        // (del f) x I contributes temporal faces over the
                        // cycle edges of f
                        if e.kind == EntityKind::SpatialEdge && e.time == tau {
                            push(
                                EntityRef::new(EntityKind::TemporalFace, e.index, tau),
                                (tf.sign * sg) as i32,
                            );
                        }
                    }
                    push(EntityRef::new(EntityKind::SpatialFace, tf.id, tau1), tf.sign as i32);
                    push(EntityRef::new(EntityKind::SpatialFace, tf.id, tau), -(tf.sign as i32));
                    // minus boundary of the top tet, plus boundary of the bottom
                    push(EntityRef::new(EntityKind::SpatialFace, tf.id, tau1), -(tf.sign as i32));
                    push(EntityRef::new(EntityKind::SpatialFace, tf.id, tau), tf.sign as i32);
                }
                for (k, v) in acc {
                    assert_eq!(v, 0, "prism 2-cell {k:?} does not cancel");
                }
            }
        }
    }

    #[test]
    fn temporal_face_cycle_matches_convention() {
        let m = build_spacetime(2, 3).unwrap();
        let e = 5u32;
        let edge = m.spatial.edges[e as usize];
        let cyc = m
            .incidence(&EntityRef::new(EntityKind::TemporalFace, e, 1))
            .unwrap();
        assert_eq!(
            cyc[0],
            (EntityRef::new(EntityKind::SpatialEdge, e, 1), 1)
        );
        assert_eq!(
            cyc[1],
            (EntityRef::new(EntityKind::TemporalEdge, edge.b, 1), 1)
        );
        assert_eq!(
            cyc[2],
            (EntityRef::new(EntityKind::SpatialEdge, e, 2), -1)
        );
        assert_eq!(
            cyc[3],
            (EntityRef::new(EntityKind::TemporalEdge, edge.a, 1), -1)
        );
    }

    #[test]
    fn spacetime_counts_and_wrap() {
        let m = build_spacetime(4, 4).unwrap();
        // one temporal face per spatial edge per slab
        assert_eq!(m.spatial.edge_count(), 7 * 64);
        assert_eq!(m.wrap_time(4), 0);
        assert_eq!(m.wrap_time(-1), 3);
        assert!((m.dt - 0.25).abs() < 1e-16);
        assert!((m.spatial.h - m.dt).abs() < 1e-16, "CFL family dt = h");

        let m2 = build_spacetime(2, 2).unwrap();
        assert_eq!(m2.spatial.tet_count() * m2.n_t, 96); // prisms
    }

    #[test]
    fn deterministic_rebuild() {
        let a = build_spatial(3).unwrap();
        let b = build_spatial(3).unwrap();
        assert_eq!(a, b);
        let sa = build_spacetime(2, 5).unwrap();
        let sb = build_spacetime(2, 5).unwrap();
        assert_eq!(sa, sb);
    }

    #[test]
    fn connecting_edge_covers_all_tet_pairs() {
        let m = build_spacetime(2, 2).unwrap();
        let s = &m.spatial;
        for t in &s.tets {
            for i in 0..4 {
                for j in 0..4 {
                    let v = EntityRef::new(EntityKind::Vertex, t.verts[i], 0);
                    let w = EntityRef::new(EntityKind::Vertex, t.verts[j], 0);
                    let tr = m.connecting_edge(&v, &w).unwrap();
                    if i == j {
                        assert_eq!(tr, Transport::Identity);
                        continue;
                    }
                    match tr {
                        Transport::Link { edge, sign } => {
                            assert_eq!(edge.kind, EntityKind::SpatialEdge);
                            let e = &s.edges[edge.index as usize];
                            if sign > 0 {
                                assert_eq!((e.a, e.b), (t.verts[i], t.verts[j]));
                            } else {
                                assert_eq!((e.a, e.b), (t.verts[j], t.verts[i]));
                            }
                        }
                        Transport::Identity => panic!("distinct vertices need a link"),
                    }
                }
            }
        }
    }

    #[test]
    fn connecting_edge_temporal_and_failures() {
        let m = build_spacetime(4, 4).unwrap();
        let v0 = EntityRef::new(EntityKind::Vertex, 0, 1);
        let v0_next = EntityRef::new(EntityKind::Vertex, 0, 2);
        match m.connecting_edge(&v0, &v0_next).unwrap() {
            Transport::Link { edge, sign } => {
                assert_eq!(edge, EntityRef::new(EntityKind::TemporalEdge, 0, 1));
                assert_eq!(sign, 1);
            }
            _ => panic!(),
        }
        match m.connecting_edge(&v0_next, &v0).unwrap() {
            Transport::Link { sign, .. } => assert_eq!(sign, -1),
            _ => panic!(),
        }
        // far apart in space: (0,0,0) and (2,0,0) share no tetrahedron at n=4
        let far = EntityRef::new(EntityKind::Vertex, m.spatial.vertex_id(2, 0, 0), 1);
        assert!(matches!(
            m.connecting_edge(&v0, &far),
            Err(Error::NotAdjacent)
        ));
        // same spatial vertex two slabs apart
        let v0_far = EntityRef::new(EntityKind::Vertex, 0, 3);
        assert!(matches!(
            m.connecting_edge(&v0, &v0_far),
            Err(Error::NotAdjacent)
        ));
    }

    #[test]
    fn dump_is_stable() {
        let m = build_spacetime(2, 2).unwrap();
        let mut a = Vec::new();
        m.dump(&mut a).unwrap();
        let mut b = Vec::new();
        m.dump(&mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        // header + 8 vertices + 56 edges + 96 faces + 48 tets
        assert_eq!(text.lines().count(), 1 + 8 + 56 + 96 + 48);
    }

    #[test]
    fn distinguished_point_is_own_vertex() {
        let m = build_spatial(3).unwrap();
        for f in &m.faces {
            assert!(f.verts.contains(&f.verts[0]));
            assert_eq!(f.root, f.verts[0]);
        }
    }
}
