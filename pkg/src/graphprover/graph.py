"""Embedded labeled property graph store.

The store keeps a directed multigraph whose vertices and edges both carry a
set of string labels plus a property map from string keys to scalar values
(str, int, bool). Self-loops and parallel edges are allowed. Element ids are
small integers, assigned monotonically and never reused, so iteration in id
order reproduces creation order.

Every mutating operation appends inverse entries to an undo journal.
``mark()`` returns the current journal position and ``undo_to(mark)`` reverts
the graph to that position; this is the primitive consumed by transactional
transforms and by tactic backtracking higher up the stack.

Concurrency contract: any number of threads may read concurrently, but a
writer requires exclusive access. The store itself does no locking; instances
may be handed between threads as long as the caller serializes writes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    DuplicateKeyError,
    NoMatchError,
    ProofImportError,
    TransformFailedError,
    UnknownEdgeError,
    UnknownVertexError,
)

Value = str | int | bool

_VALID_VALUE_TYPES = (str, int, bool)


def _check_value(key: str, value: Value) -> None:
    if not isinstance(value, _VALID_VALUE_TYPES):
        raise TransformFailedError(f"property {key!r} has unsupported value {value!r}")


def _props_from(props: Mapping[str, Value] | Iterable[tuple[str, Value]] | None) -> dict[str, Value]:
    """Normalize a property argument, rejecting duplicate keys in pair form."""
    if props is None:
        return {}
    if isinstance(props, Mapping):
        out = dict(props)
    else:
        out = {}
        for key, value in props:
            if key in out:
                raise DuplicateKeyError(f"duplicate property key {key!r}")
            out[key] = value
    for key, value in out.items():
        _check_value(key, value)
    return out


# -- patterns ---------------------------------------------------------------


@dataclass(frozen=True)
class NodePattern:
    """Matches a vertex: all listed labels present, all listed props equal."""

    name: str
    labels: frozenset[str] = frozenset()
    props: tuple[tuple[str, Value], ...] = ()


@dataclass(frozen=True)
class EdgePattern:
    """Matches an edge between two bound node binders.

    ``direction`` is "out" (src binder -> dst binder) or "any". An unnamed
    edge pattern is an existence constraint; a named one binds the edge id,
    so parallel edges produce distinct bindings.
    """

    src: str
    dst: str
    labels: frozenset[str] = frozenset()
    props: tuple[tuple[str, Value], ...] = ()
    direction: str = "out"
    name: str | None = None


@dataclass(frozen=True)
class WhereClause:
    """Property comparison between two bound elements; op is "eq" or "ne".

    A clause whose referenced property is missing on either side fails.
    """

    op: str
    left: tuple[str, str]
    right: tuple[str, str]


@dataclass(frozen=True)
class GraphPattern:
    nodes: tuple[NodePattern, ...]
    edges: tuple[EdgePattern, ...] = ()
    where: tuple[WhereClause, ...] = ()

    def validate(self) -> None:
        names: set[str] = set()
        for np in self.nodes:
            if np.name in names:
                raise DuplicateKeyError(f"duplicate binder {np.name!r}")
            names.add(np.name)
        node_names = {np.name for np in self.nodes}
        for ep in self.edges:
            if ep.src not in node_names or ep.dst not in node_names:
                raise TransformFailedError(
                    f"edge pattern references undeclared binder {ep.src!r} or {ep.dst!r}"
                )
            if ep.name is not None:
                if ep.name in names:
                    raise DuplicateKeyError(f"duplicate binder {ep.name!r}")
                names.add(ep.name)
            if ep.direction not in ("out", "any"):
                raise TransformFailedError(f"bad direction {ep.direction!r}")
        for wc in self.where:
            if wc.op not in ("eq", "ne"):
                raise TransformFailedError(f"bad where op {wc.op!r}")
            for binder, _key in (wc.left, wc.right):
                if binder not in names:
                    raise TransformFailedError(f"where clause references unbound {binder!r}")


# A binding maps binder names to element ids. Node binders map to vertex ids,
# named edge binders to edge ids.
Binding = dict[str, int]


# -- transform scripts ------------------------------------------------------


@dataclass(frozen=True)
class CreateVertex:
    binder: str
    labels: frozenset[str] = frozenset()
    props: tuple[tuple[str, Value], ...] = ()


@dataclass(frozen=True)
class CreateEdge:
    binder: str | None
    src: str
    dst: str
    labels: frozenset[str] = frozenset()
    props: tuple[tuple[str, Value], ...] = ()


@dataclass(frozen=True)
class AddLabel:
    binder: str
    label: str


@dataclass(frozen=True)
class SetProp:
    binder: str
    key: str
    value: Value


Action = CreateVertex | CreateEdge | AddLabel | SetProp


@dataclass(frozen=True)
class TransformScript:
    actions: tuple[Action, ...]


# -- the store --------------------------------------------------------------


class PropertyGraph:
    def __init__(self) -> None:
        self._vlabels: dict[int, set[str]] = {}
        self._vprops: dict[int, dict[str, Value]] = {}
        self._ends: dict[int, tuple[int, int]] = {}
        self._elabels: dict[int, set[str]] = {}
        self._eprops: dict[int, dict[str, Value]] = {}
        self._out: dict[int, set[int]] = {}
        self._in: dict[int, set[int]] = {}
        self._next_vertex = 1
        self._next_edge = 1
        self._journal: list[tuple] = []

    # -- primitive queries

    def vertices(self) -> list[int]:
        return sorted(self._vlabels)

    def edges(self) -> list[int]:
        return sorted(self._ends)

    def has_vertex(self, vid: int) -> bool:
        return vid in self._vlabels

    def has_edge(self, eid: int) -> bool:
        return eid in self._ends

    def vertex_labels(self, vid: int) -> frozenset[str]:
        self._need_vertex(vid)
        return frozenset(self._vlabels[vid])

    def vertex_props(self, vid: int) -> dict[str, Value]:
        self._need_vertex(vid)
        return dict(self._vprops[vid])

    def edge_labels(self, eid: int) -> frozenset[str]:
        self._need_edge(eid)
        return frozenset(self._elabels[eid])

    def edge_props(self, eid: int) -> dict[str, Value]:
        self._need_edge(eid)
        return dict(self._eprops[eid])

    def edge_ends(self, eid: int) -> tuple[int, int]:
        self._need_edge(eid)
        return self._ends[eid]

    def out_edges(self, vid: int) -> list[int]:
        self._need_vertex(vid)
        return sorted(self._out[vid])

    def in_edges(self, vid: int) -> list[int]:
        self._need_vertex(vid)
        return sorted(self._in[vid])

    def _need_vertex(self, vid: int) -> None:
        if vid not in self._vlabels:
            raise UnknownVertexError(f"no vertex {vid}")

    def _need_edge(self, eid: int) -> None:
        if eid not in self._ends:
            raise UnknownEdgeError(f"no edge {eid}")

    # -- mutations

    def add_vertex(
        self,
        labels: Iterable[str] = (),
        props: Mapping[str, Value] | Iterable[tuple[str, Value]] | None = None,
    ) -> int:
        prop_map = _props_from(props)
        vid = self._next_vertex
        self._next_vertex += 1
        self._vlabels[vid] = set(labels)
        self._vprops[vid] = prop_map
        self._out[vid] = set()
        self._in[vid] = set()
        self._journal.append(("rm_v", vid))
        return vid

    def add_edge(
        self,
        src: int,
        dst: int,
        labels: Iterable[str] = (),
        props: Mapping[str, Value] | Iterable[tuple[str, Value]] | None = None,
    ) -> int:
        self._need_vertex(src)
        self._need_vertex(dst)
        prop_map = _props_from(props)
        eid = self._next_edge
        self._next_edge += 1
        self._ends[eid] = (src, dst)
        self._elabels[eid] = set(labels)
        self._eprops[eid] = prop_map
        self._out[src].add(eid)
        self._in[dst].add(eid)
        self._journal.append(("rm_e", eid))
        return eid

    def remove_edge(self, eid: int) -> None:
        self._need_edge(eid)
        src, dst = self._ends[eid]
        self._journal.append(
            ("add_e", eid, src, dst, set(self._elabels[eid]), dict(self._eprops[eid]))
        )
        self._out[src].discard(eid)
        self._in[dst].discard(eid)
        del self._ends[eid], self._elabels[eid], self._eprops[eid]

    def remove_vertex(self, vid: int) -> None:
        """Remove a vertex and cascade-delete all incident edges."""
        self._need_vertex(vid)
        for eid in sorted(self._out[vid] | self._in[vid]):
            if eid in self._ends:
                self.remove_edge(eid)
        self._journal.append(("add_v", vid, set(self._vlabels[vid]), dict(self._vprops[vid])))
        del self._vlabels[vid], self._vprops[vid], self._out[vid], self._in[vid]

    def add_vertex_label(self, vid: int, label: str) -> None:
        self._need_vertex(vid)
        if label not in self._vlabels[vid]:
            self._vlabels[vid].add(label)
            self._journal.append(("rm_vl", vid, label))

    def remove_vertex_label(self, vid: int, label: str) -> None:
        self._need_vertex(vid)
        if label in self._vlabels[vid]:
            self._vlabels[vid].discard(label)
            self._journal.append(("add_vl", vid, label))

    def add_edge_label(self, eid: int, label: str) -> None:
        self._need_edge(eid)
        if label not in self._elabels[eid]:
            self._elabels[eid].add(label)
            self._journal.append(("rm_el", eid, label))

    def set_vertex_prop(self, vid: int, key: str, value: Value) -> None:
        self._need_vertex(vid)
        _check_value(key, value)
        props = self._vprops[vid]
        if key in props:
            self._journal.append(("set_vp", vid, key, props[key]))
        else:
            self._journal.append(("del_vp", vid, key))
        props[key] = value

    def del_vertex_prop(self, vid: int, key: str) -> None:
        self._need_vertex(vid)
        props = self._vprops[vid]
        if key in props:
            self._journal.append(("set_vp", vid, key, props.pop(key)))

    def set_edge_prop(self, eid: int, key: str, value: Value) -> None:
        self._need_edge(eid)
        _check_value(key, value)
        props = self._eprops[eid]
        if key in props:
            self._journal.append(("set_ep", eid, key, props[key]))
        else:
            self._journal.append(("del_ep", eid, key))
        props[key] = value

    # -- undo journal

    def mark(self) -> int:
        return len(self._journal)

    def undo_to(self, mark: int) -> None:
        """Revert all mutations recorded after ``mark``, most recent first."""
        assert 0 <= mark <= len(self._journal)
        while len(self._journal) > mark:
            entry = self._journal.pop()
            self._apply_inverse(entry)

    def _apply_inverse(self, entry: tuple) -> None:
        kind = entry[0]
        if kind == "rm_v":
            vid = entry[1]
            del self._vlabels[vid], self._vprops[vid], self._out[vid], self._in[vid]
        elif kind == "rm_e":
            eid = entry[1]
            src, dst = self._ends[eid]
            self._out[src].discard(eid)
            self._in[dst].discard(eid)
            del self._ends[eid], self._elabels[eid], self._eprops[eid]
        elif kind == "add_v":
            _, vid, labels, props = entry
            self._vlabels[vid] = labels
            self._vprops[vid] = props
            self._out[vid] = set()
            self._in[vid] = set()
        elif kind == "add_e":
            _, eid, src, dst, labels, props = entry
            self._ends[eid] = (src, dst)
            self._elabels[eid] = labels
            self._eprops[eid] = props
            self._out[src].add(eid)
            self._in[dst].add(eid)
        elif kind == "rm_vl":
            self._vlabels[entry[1]].discard(entry[2])
        elif kind == "add_vl":
            self._vlabels[entry[1]].add(entry[2])
        elif kind == "rm_el":
            self._elabels[entry[1]].discard(entry[2])
        elif kind == "add_el":
            self._elabels[entry[1]].add(entry[2])
        elif kind == "set_vp":
            self._vprops[entry[1]][entry[2]] = entry[3]
        elif kind == "del_vp":
            self._vprops[entry[1]].pop(entry[2], None)
        elif kind == "set_ep":
            self._eprops[entry[1]][entry[2]] = entry[3]
        elif kind == "del_ep":
            self._eprops[entry[1]].pop(entry[2], None)
        else:  # pragma: no cover - journal entries are internal
            raise AssertionError(f"unknown journal entry {kind!r}")

    # -- comparison

    def structurally_equal(self, other: "PropertyGraph") -> bool:
        """Same vertex/edge ids, adjacency, label sets, and property maps."""
        return (
            self._vlabels == other._vlabels
            and self._vprops == other._vprops
            and self._ends == other._ends
            and self._elabels == other._elabels
            and self._eprops == other._eprops
        )

    # -- matching

    def match(self, pattern: GraphPattern) -> list[Binding]:
        """All binder assignments satisfying the pattern, deterministically ordered.

        Node binders range over vertices independently (assignments need not
        be injective). Candidates are explored in ascending id order, so two
        stores built by the same construction sequence enumerate bindings in
        the same order.
        """
        pattern.validate()
        results: list[Binding] = []
        vertices = self.vertices()
        self._match_nodes(pattern, 0, {}, vertices, results)
        return results

    def _node_ok(self, np: NodePattern, vid: int) -> bool:
        if not set(np.labels) <= self._vlabels[vid]:
            return False
        props = self._vprops[vid]
        return all(props.get(k) == v for k, v in np.props)

    def _edge_ok(self, ep: EdgePattern, eid: int, src: int, dst: int) -> bool:
        ends = self._ends[eid]
        if ep.direction == "out":
            if ends != (src, dst):
                return False
        else:
            if ends != (src, dst) and ends != (dst, src):
                return False
        if not set(ep.labels) <= self._elabels[eid]:
            return False
        props = self._eprops[eid]
        return all(props.get(k) == v for k, v in ep.props)

    def _match_nodes(
        self,
        pattern: GraphPattern,
        idx: int,
        binding: Binding,
        vertices: list[int],
        results: list[Binding],
    ) -> None:
        if idx == len(pattern.nodes):
            self._match_edges(pattern, 0, binding, results)
            return
        np = pattern.nodes[idx]
        for vid in vertices:
            if self._node_ok(np, vid):
                binding[np.name] = vid
                self._match_nodes(pattern, idx + 1, binding, vertices, results)
                del binding[np.name]

    def _match_edges(self, pattern: GraphPattern, idx: int, binding: Binding, results: list[Binding]) -> None:
        if idx == len(pattern.edges):
            if self._where_ok(pattern, binding):
                results.append(dict(binding))
            return
        ep = pattern.edges[idx]
        src = binding[ep.src]
        dst = binding[ep.dst]
        candidates = self._out[src] & self._in[dst]
        if ep.direction == "any":
            candidates |= self._out[dst] & self._in[src]
        found = False
        for eid in sorted(candidates):
            if not self._edge_ok(ep, eid, src, dst):
                continue
            if ep.name is None:
                # existence check only; one witness is enough
                found = True
                break
            binding[ep.name] = eid
            self._match_edges(pattern, idx + 1, binding, results)
            del binding[ep.name]
        if ep.name is None and found:
            self._match_edges(pattern, idx + 1, binding, results)

    def _where_ok(self, pattern: GraphPattern, binding: Binding) -> bool:
        edge_binders = {ep.name for ep in pattern.edges if ep.name is not None}

        def prop_of(binder: str, key: str) -> tuple[bool, Value | None]:
            elem = binding[binder]
            props = self._eprops[elem] if binder in edge_binders else self._vprops[elem]
            if key in props:
                return True, props[key]
            return False, None

        for wc in pattern.where:
            ok_l, lv = prop_of(*wc.left)
            ok_r, rv = prop_of(*wc.right)
            if not (ok_l and ok_r):
                return False
            if wc.op == "eq" and lv != rv:
                return False
            if wc.op == "ne" and lv == rv:
                return False
        return True

    # -- transactional transforms

    def apply_transform(self, pattern: GraphPattern, script: TransformScript) -> Binding:
        """Match ``pattern``, take the first binding, and run ``script`` on it.

        All-or-nothing: if any action fails, every action already performed is
        reverted and TransformFailed is raised. With no binding, NoMatch.
        Returns the binding extended with ids of created elements.
        """
        bindings = self.match(pattern)
        if not bindings:
            raise NoMatchError("pattern produced no binding")
        binding = dict(bindings[0])
        start = self.mark()
        edge_binders = {ep.name for ep in pattern.edges if ep.name is not None}
        created_edges: set[str] = set()
        try:
            for action in script.actions:
                if isinstance(action, CreateVertex):
                    if action.binder in binding:
                        raise TransformFailedError(f"binder {action.binder!r} already bound")
                    binding[action.binder] = self.add_vertex(action.labels, action.props)
                elif isinstance(action, CreateEdge):
                    for b in (action.src, action.dst):
                        if b not in binding or b in edge_binders or b in created_edges:
                            raise TransformFailedError(f"{b!r} is not a bound vertex")
                    eid = self.add_edge(binding[action.src], binding[action.dst], action.labels, action.props)
                    if action.binder is not None:
                        if action.binder in binding:
                            raise TransformFailedError(f"binder {action.binder!r} already bound")
                        binding[action.binder] = eid
                        created_edges.add(action.binder)
                elif isinstance(action, AddLabel):
                    self._label_bound(binding, edge_binders | created_edges, action.binder, action.label)
                elif isinstance(action, SetProp):
                    self._setprop_bound(binding, edge_binders | created_edges, action.binder, action.key, action.value)
                else:
                    raise TransformFailedError(f"unknown action {action!r}")
        except (DuplicateKeyError, UnknownVertexError, UnknownEdgeError, TransformFailedError) as exc:
            self.undo_to(start)
            if isinstance(exc, TransformFailedError):
                raise
            raise TransformFailedError(str(exc)) from exc
        return binding

    def _label_bound(self, binding: Binding, edge_binders: set[str], binder: str, label: str) -> None:
        if binder not in binding:
            raise TransformFailedError(f"unbound binder {binder!r}")
        if binder in edge_binders:
            self.add_edge_label(binding[binder], label)
        else:
            self.add_vertex_label(binding[binder], label)

    def _setprop_bound(self, binding: Binding, edge_binders: set[str], binder: str, key: str, value: Value) -> None:
        if binder not in binding:
            raise TransformFailedError(f"unbound binder {binder!r}")
        if binder in edge_binders:
            self.set_edge_prop(binding[binder], key, value)
        else:
            self.set_vertex_prop(binding[binder], key, value)

    # -- serialization

    def to_document(self) -> dict:
        """Canonical JSON-ready document.

        Ids are renumbered densely ("1".."n", separate spaces for vertices and
        edges) in ascending original-id order, so two stores holding the same
        structure built in the same order serialize to identical bytes even if
        their internal counters diverged through undo.
        """
        vmap = {vid: str(i + 1) for i, vid in enumerate(self.vertices())}
        emap = {eid: str(i + 1) for i, eid in enumerate(self.edges())}
        vertices = [
            {
                "id": vmap[vid],
                "labels": sorted(self._vlabels[vid]),
                "props": dict(sorted(self._vprops[vid].items())),
            }
            for vid in self.vertices()
        ]
        edges = [
            {
                "id": emap[eid],
                "src": vmap[self._ends[eid][0]],
                "dst": vmap[self._ends[eid][1]],
                "labels": sorted(self._elabels[eid]),
                "props": dict(sorted(self._eprops[eid].items())),
            }
            for eid in self.edges()
        ]
        return {"version": 1, "vertices": vertices, "edges": edges}

    @classmethod
    def from_document(cls, doc: dict) -> tuple["PropertyGraph", dict[str, int]]:
        """Rebuild a graph from a document; returns (graph, doc-id -> vertex-id)."""
        if not isinstance(doc, dict) or doc.get("version") != 1:
            raise ProofImportError("document version must be 1")
        g = cls()
        vmap: dict[str, int] = {}
        for item in doc.get("vertices", []):
            did = item.get("id")
            if not isinstance(did, str) or did in vmap:
                raise ProofImportError(f"bad or duplicate vertex id {did!r}")
            labels = item.get("labels", [])
            props = item.get("props", {})
            if not isinstance(labels, list) or not isinstance(props, dict):
                raise ProofImportError(f"malformed vertex {did!r}")
            for key, value in props.items():
                if not isinstance(value, _VALID_VALUE_TYPES):
                    raise ProofImportError(f"vertex {did!r} property {key!r} has bad type")
            vmap[did] = g.add_vertex(labels, props)
        seen_edges: set[str] = set()
        for item in doc.get("edges", []):
            did = item.get("id")
            if not isinstance(did, str) or did in seen_edges:
                raise ProofImportError(f"bad or duplicate edge id {did!r}")
            seen_edges.add(did)
            src, dst = item.get("src"), item.get("dst")
            if src not in vmap or dst not in vmap:
                raise ProofImportError(f"edge {did!r} references unknown vertex")
            labels = item.get("labels", [])
            props = item.get("props", {})
            if not isinstance(labels, list) or not isinstance(props, dict):
                raise ProofImportError(f"malformed edge {did!r}")
            g.add_edge(vmap[src], vmap[dst], labels, props)
        return g, vmap


def document_bytes(doc: dict) -> str:
    """Serialize a document deterministically; equal docs give equal bytes."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
