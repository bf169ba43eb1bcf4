#!/usr/bin/env python3
"""Writes the labeled fixture corpus to crates/core/fixtures/v1.

Every fixture is authored here together with its ground truth: per-control
labels (visible at first viewport, actionable in one interaction, control
class), the expected route per policy, and the component vector that route
implies. Routes and components are worked out from the authored layout, not
by running the engine, so the golden tests compare two independent accounts.

Run from the repository root:  python3 tools/make_fixtures.py
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "crates" / "core" / "fixtures" / "v1"

VIEWPORTS = {"desktop": (1440, 900), "mobile": (390, 844)}
HANDLING_S = 0.1
SCROLL_S_PER_VIEWPORT = 0.05
FOCUS_STEP_S = 0.05
WAIT_BUDGET_MS = 300

TOGGLES = [
    ("Analytics", "Helps us count visits and measure site performance."),
    ("Advertising", "Lets partners show ads based on your interests."),
    ("Personalisation", "Remembers your choices to tailor content."),
]
TRAP_LINKS = ["Privacy policy", "Cookie policy", "Vendor list"]


class Fixture:
    def __init__(self, fid, kind, note, tags=(), breakpoint="desktop", panes=("main",),
                 scrollable=False, scroll_height=None, evh=None):
        self.id = fid
        self.kind = kind
        self.note = note
        self.tags = list(tags)
        self.breakpoint = breakpoint
        self.vw, self.vh = VIEWPORTS[breakpoint]
        self.desktop = breakpoint == "desktop"
        self.x0, self.width = (320, 800) if self.desktop else (15, 360)
        self.panes = list(panes)
        self.pane = self.panes[0]
        self.scrollable = scrollable
        self.scroll_height = scroll_height if scroll_height is not None else self.vh
        self.evh = evh
        self.nodes = []
        self.truth = {}
        self.persistent = []
        self.routes = {}
        self.hidden_reveals = {}
        self.y = 40
        self.add("root", "container", (self.x0, 0, self.width, 0), parent=None)

    # geometry -----------------------------------------------------------

    def eff_vh(self):
        return self.evh if (self.scrollable and self.evh is not None) else self.vh

    def in_first_viewport(self, b):
        x, y, w, h = b
        return y >= 0 and y + h <= self.eff_vh() and x >= 0 and x + w <= self.vw

    # node authoring -----------------------------------------------------

    def add(self, nid, role, bounds, parent="root", pane=None, **extra):
        x, y, w, h = bounds
        node = {
            "id": nid,
            "paneId": pane or self.pane,
            "role": role,
            "bounds": {"x": x, "y": y, "w": w, "h": h},
        }
        if parent is not None:
            node["parentId"] = parent
        for key, value in extra.items():
            node[key] = value
        self.nodes.append(node)
        return node

    def node(self, nid):
        return next(n for n in self.nodes if n["id"] == nid)

    def text(self, nid, label, h, parent="root", hidden=False, **extra):
        extra.setdefault("label", label)
        if hidden:
            extra["visible"] = False
        self.add(nid, "text", (self.x0 + 20, self.y, self.width - 40, h), parent=parent, **extra)
        self.y += h + 12

    def control(self, nid, role, label, bounds, cls, parent="root", substantive=False,
                seen=None, actionable=None, **extra):
        """Interactive node plus its ground-truth label on the initial pane.

        Visibility defaults to "rendered and wholly inside the first viewport";
        actionability defaults to a visible, enabled reject/save button or a
        settings button that opens real choices.
        """
        extra["label"] = label
        n = self.add(nid, role, bounds, parent=parent, **extra)
        if n["paneId"] != self.panes[0]:
            return n
        rendered = n.get("visible", True)
        vis = rendered and self.in_first_viewport(bounds) if seen is None else seen
        if actionable is None:
            advances = cls in ("REJECT", "SAVE") or (cls == "SETTINGS" and substantive)
            actionable = vis and n.get("enabled", True) and role in ("button", "link") and advances
        self.truth[nid] = {"visible": bool(vis), "actionable": bool(actionable), "controlClass": cls}
        return n

    def buttons(self, specs, parent="root"):
        """Row of buttons on desktop, a stack on mobile. specs: (id, label, class, extra)."""
        if self.desktop:
            for i, (nid, label, cls, extra) in enumerate(specs):
                self.control(nid, "button", label, (self.x0 + 20 + 260 * i, self.y, 240, 48), cls,
                             parent=parent, **extra)
            self.y += 60
        else:
            for nid, label, cls, extra in specs:
                self.control(nid, "button", label, (self.x0 + 15, self.y, 330, 48), cls,
                             parent=parent, **extra)
                self.y += 60

    def toggle_rows(self, which, parent="root", hidden=False, enables=()):
        for i in which:
            name, why = TOGGLES[i - 1]
            extra = {}
            if hidden:
                extra["visible"] = False
            if enables:
                extra["effects"] = [{"kind": "toggleState", "target": t} for t in enables]
            if self.desktop:
                tb, rb, step = (self.x0 + 20, self.y, 60, 32), (self.x0 + 100, self.y, 600, 24), 56
            else:
                tb, rb, step = (self.x0 + 15, self.y, 60, 32), (self.x0 + 90, self.y, 255, 40), 64
            self.control(f"toggle-{i}", "toggle", name, tb, "UNKNOWN", parent=parent, **extra)
            rextra = {"visible": False} if hidden else {}
            self.add(f"rationale-{i}", "text", rb, parent=parent, label=why, rationaleFor=f"toggle-{i}", **rextra)
            self.y += step

    def trap(self, nid="trap", parent="root"):
        self.add(nid, "container", (self.x0 + 20, self.y, self.width - 40, 32), parent=parent, focusTrap=True)
        w = (self.width - 40) // 3
        for i, label in enumerate(TRAP_LINKS, start=1):
            self.control(f"{nid}-{i}", "link", label, (self.x0 + 20 + w * i - w, self.y, w - 10, 24),
                         "INFORMATIONAL", parent=nid, tabIndex=1)
        self.y += 44

    def change_consent(self):
        self.add("change-consent", "link", (16, self.vh - 40, 140, 24), parent=None,
                 label="Change consent", pane=self.panes[0])
        self.truth["change-consent"] = {"visible": True, "actionable": False, "controlClass": "REVERSIBILITY"}
        self.persistent.append("change-consent")

    # expectations -------------------------------------------------------

    def route(self, policy, steps, hidden_reveals):
        """steps: ("scroll", px) | ("loop", trap id) | ("do", node id)."""
        self.routes[policy] = steps
        self.hidden_reveals[policy] = hidden_reveals

    def expected(self, policy):
        steps = self.routes.get(policy)
        if steps is None:
            return None
        kinds, px_total, time, loops = [], 0.0, 0.0, 0
        for step in steps:
            if step[0] == "scroll":
                kinds.append("SCROLL")
                px_total += step[1]
                time += step[1] * SCROLL_S_PER_VIEWPORT / self.eff_vh()
            elif step[0] == "loop":
                kinds.append("FOCUS_LOOP")
                loops += 1
                stops = sum(1 for n in self.nodes if n.get("parentId") == step[1])
                time += stops * FOCUS_STEP_S
            else:
                n = self.node(step[1])
                kinds.append({"expander": "EXPAND", "toggle": "TOGGLE", "checkbox": "TOGGLE"}.get(n["role"], "ACTION"))
                opens = any(e["kind"] in ("reveal", "navigate") for e in n.get("effects", []))
                gate = n.get("animationMs", 0) or (WAIT_BUDGET_MS if n.get("gated") and opens else 0)
                time += HANDLING_S + gate / 1000.0
        censored = not steps
        strip = " -> ".join("EV_" + k for k in kinds) if not censored else "[BUDGET_EXHAUSTED]"
        return {
            "strip": strip,
            "terminalNodeId": None if censored else steps[-1][1],
            "components": [round(px_total / self.eff_vh(), 9), round(time, 9), loops, self.hidden_reveals[policy]],
            "censored": censored,
        }

    def finish(self, root_h=None):
        root = self.nodes[0]
        bottoms = [n["bounds"]["y"] + n["bounds"]["h"] for n in self.nodes[1:]
                   if n["paneId"] == self.panes[0] and n.get("parentId") is not None]
        root["bounds"]["h"] = root_h or (max(bottoms) + 24 if bottoms else 100)
        surface = {"rootNodeId": "root", "scrollable": self.scrollable, "scrollHeight": self.scroll_height}
        if self.evh is not None:
            surface["effectiveViewportHeight"] = self.evh
        meta = {"source": "authored", "captureNote": self.note, "breakpoint": self.breakpoint}
        if self.persistent:
            meta["persistent"] = self.persistent
        snapshot = {
            "version": 1,
            "meta": meta,
            "viewport": {"width": self.vw, "height": self.vh, "name": self.breakpoint},
            "surface": surface,
            "panes": [{"id": p, "initial": i == 0} for i, p in enumerate(self.panes)],
            "nodes": self.nodes,
        }
        labels = [dict(nodeId=k, **v) for k, v in sorted(self.truth.items())]
        entry = {
            "id": self.id,
            "snapshot": f"{self.id}.snapshot.json",
            "archetype": self.kind,
            "tags": sorted(self.tags),
            "note": self.note,
            "labels": labels,
            "expected": {p: self.expected(p) for p in ("pointer", "keyboard")},
        }
        return snapshot, entry


def accept_button(primary=True, **extra):
    extra.setdefault("emphasisClass", "primary" if primary else "plain")
    return ("accept", "Accept all", "ACCEPT", extra)


def header(f, body_h=60, steps=0):
    f.text("title", "We value your privacy", 32)
    if steps:
        f.text("progress", f"Step 1 of {steps}. Almost done!", 24, celebratory=True)
    f.text("body", "We and our partners use cookies to store and access information on your device.", body_h)


# --- co-present -----------------------------------------------------------

def co_present(fid, reject_label, breakpoint="desktop", trap=False, settle=0, save=True, reversible=True,
               reject_first=False, tags=("co-present",), note="Accept, reject and granular toggles share the first pane."):
    f = Fixture(fid, "CO_PRESENT", note, tags=tags, breakpoint=breakpoint)
    header(f)
    if trap:
        f.trap()
    f.toggle_rows([1, 2, 3])
    reject = ("reject", reject_label, "REJECT", {"emphasisClass": "primary", "animationMs": settle} if settle
              else {"emphasisClass": "primary"})
    row = [reject, accept_button()] if reject_first else [accept_button(), reject]
    if save:
        row.append(("save", "Save choices", "SAVE", {}))
    f.buttons(row)
    if reversible:
        f.change_consent()
    # an animated reject loses the time tie-break to an instant save
    route = [("do", "save" if settle and save else "reject")]
    f.route("pointer", route, 0)
    f.route("keyboard", ([("loop", "trap")] if trap else []) + route, 0)
    return f


# --- scroll wall ------------------------------------------------------------

def scroll_wall(fid, depth_px, breakpoint="desktop", trap=False, evh=None, reject_label="Reject all",
                tags=("scroll-wall",), note="The only alternative sits below a long policy text."):
    f = Fixture(fid, "SCROLL_WALL", note, tags=tags, breakpoint=breakpoint, scrollable=True, evh=evh)
    header(f)
    f.buttons([accept_button()])
    if trap:
        f.trap()
    top = f.y
    reject_y = depth_px - 48
    f.add("policy-text", "text", (f.x0 + 20, top, f.width - 40, reject_y - 12 - top),
          label="This notice explains how we and our partners process personal data.")
    f.y = reject_y
    f.buttons([("reject", reject_label, "REJECT", {})])
    f.scroll_height = depth_px + 24
    px = depth_px - f.eff_vh()
    route = [("scroll", px), ("do", "reject")]
    f.route("pointer", route, 0)
    f.route("keyboard", ([("loop", "trap")] if trap else []) + route, 0)
    return f


# --- accordion -------------------------------------------------------------

def accordion(fid, depth=1, breakpoint="desktop", trap=False, gate=300, tags=("accordion",),
              note="Choices sit inside collapsed disclosures; the reject control unlocks after a category choice."):
    """`depth` chained disclosures; each panel holds the next disclosure, the last holds the choices.

    Panels are siblings under the root because a reveal exposes a whole subtree.
    """
    f = Fixture(fid, "ACCORDION", note, tags=tags, breakpoint=breakpoint)
    header(f)
    f.buttons([accept_button()])
    if trap:
        f.trap()
    route = []
    parent = "root"
    labels = ["Cookie settings", "More options", "Manage preferences", "Customize settings"]
    for k in range(1, depth + 1):
        hidden = k > 1
        extra = {"animationMs": gate, "effects": [{"kind": "reveal", "target": f"panel-{k}"}]}
        if hidden:
            extra["visible"] = False
        f.control(f"expand-{k}", "expander", labels[k - 1], (f.x0 + 20, f.y, f.width - 40, 40), "SETTINGS",
                  parent=parent, **extra)
        f.y += 52
        f.add(f"panel-{k}", "container", (f.x0 + 20, f.y, f.width - 40, 0), visible=False)
        parent = f"panel-{k}"
        route.append(("do", f"expand-{k}"))
    f.toggle_rows([1, 2, 3], parent=parent, hidden=True, enables=("reject", "save"))
    f.buttons([("reject", "Reject all", "REJECT", {"visible": False, "enabled": False}),
               ("save", "Save choices", "SAVE", {"visible": False, "enabled": False})], parent=parent)
    for k in range(1, depth + 1):
        panel = f.node(f"panel-{k}")["bounds"]
        panel["h"] = (f.y if k == depth else f.node(f"expand-{k + 1}")["bounds"]["y"] + 40) - panel["y"]
    assert f.y <= f.vh, fid
    route += [("do", "toggle-1"), ("do", "reject")]
    f.route("pointer", route, depth)
    f.route("keyboard", ([("loop", "trap")] if trap else []) + route, depth)
    return f


# --- multi-step ------------------------------------------------------------

def multi_step(fid, panes=3, breakpoint="desktop", trap=False, gate=200, tags=("multi-step",),
               note="Choices are spread over a staged flow; refusal is only offered on the last pane."):
    ids = [f"step-{k}" for k in range(1, panes + 1)]
    f = Fixture(fid, "MULTI_STEP", note, tags=tags, breakpoint=breakpoint, panes=ids)
    header(f, steps=panes)
    if trap:
        f.trap("trap-step-1")
    cont = {"animationMs": gate, "effects": [{"kind": "navigate", "target": "step-2"}]}
    f.buttons([accept_button(), ("continue", "Continue", "UNKNOWN", cont)])
    route = [("do", "continue")]
    keyboard = ([("loop", "trap-step-1")] if trap else []) + [("do", "continue")]
    groups = {k: [] for k in range(2, panes + 1)}
    for i in (1, 2, 3):
        groups[min(i + 1, panes)].append(i)
    for k in range(2, panes + 1):
        f.pane = f"step-{k}"
        f.y = 56
        f.text(f"step-{k}-title", f"Step {k} of {panes}", 32)
        if trap:
            f.trap(f"trap-step-{k}")
            keyboard.append(("loop", f"trap-step-{k}"))
        last = k == panes
        f.toggle_rows(groups[k], enables=("reject", "save") if last else ())
        if last:
            f.buttons([("reject", "Reject all", "REJECT", {"enabled": False}),
                       ("save", "Save choices", "SAVE", {"enabled": False})])
            tail = [("do", f"toggle-{groups[k][0]}"), ("do", "reject")]
        else:
            nxt = {"animationMs": gate, "effects": [{"kind": "navigate", "target": f"step-{k + 1}"}]}
            f.buttons([(f"next-{k}", "Next", "UNKNOWN", nxt)])
            tail = [("do", f"next-{k}")]
        route += tail
        keyboard += tail
    f.pane = ids[0]
    f.route("pointer", route, panes - 1)
    f.route("keyboard", keyboard, panes - 1)
    return f


# --- named fixtures ---------------------------------------------------------

def vignette():
    f = Fixture("vignette", "SCROLL_WALL",
                "Long notice; the only path to a choice is a disclosure at the bottom that opens a preference "
                "popover above it. A focus trap of policy links precedes it in tab order.",
                tags=("vignette", "scroll-wall", "focus-trap", "scrollable-surface"), scrollable=True,
                scroll_height=1800)
    header(f)
    f.buttons([accept_button()])
    f.add("policy-text", "text", (f.x0 + 20, 230, f.width - 40, 770),
          label="This notice explains how we and our partners process personal data.")
    f.y = 1040
    f.trap()
    f.add("prefs-panel", "container", (f.x0 + 20, 1100, f.width - 40, 590), visible=False)
    f.y = 1200
    f.toggle_rows([1, 2, 3], parent="prefs-panel", hidden=True, enables=("save",))
    f.y = 1560
    f.buttons([("save", "Save choices", "SAVE", {"visible": False, "enabled": False})], parent="prefs-panel")
    f.control("customize", "expander", "Customize", (f.x0 + 20, 1700, 240, 48), "SETTINGS", animationMs=300,
              effects=[{"kind": "reveal", "target": "prefs-panel"}])
    route = [("scroll", 848), ("do", "customize"), ("do", "toggle-1"), ("do", "save")]
    f.route("pointer", route, 1)
    f.route("keyboard", [("loop", "trap")] + route, 1)
    return f


def censor():
    f = Fixture("censor", "CO_PRESENT",
                "No refusal path exists: a euphemistic disclosure reveals only prose and pre-checked toggles.",
                tags=("censored", "euphemism"))
    header(f)
    f.buttons([accept_button(),
               ("learn-more", "Learn more", "INFORMATIONAL",
                {"effects": [{"kind": "reveal", "target": "more-text"}]})])
    f.text("more-text", "Cookies help us improve your experience.", 40, hidden=True)
    f.control("experience", "expander", "Manage experience", (f.x0 + 20, f.y, 240, 40), "SETTINGS",
              effects=[{"kind": "reveal", "target": "experience-panel"}])
    f.y += 52
    f.add("experience-panel", "container", (f.x0 + 20, f.y, f.width - 40, 170), visible=False)
    f.toggle_rows([1, 2, 3], parent="experience-panel", hidden=True)
    f.route("pointer", [], 0)
    f.route("keyboard", [], 0)
    return f


# --- detector stress cases -------------------------------------------------

def euphemism_settings(fid, label, breakpoint="desktop"):
    f = Fixture(fid, "MULTI_STEP",
                f"The settings entry point is labelled \"{label}\"; a human reads it as settings, the lexicon cannot.",
                tags=("euphemism",), breakpoint=breakpoint, panes=("main", "prefs"))
    header(f)
    nav = {"effects": [{"kind": "navigate", "target": "prefs"}]}
    f.buttons([accept_button(), ("prefs-link", label, "SETTINGS", dict(nav))])
    f.truth["prefs-link"]["actionable"] = True
    f.pane = "prefs"
    f.y = 56
    f.text("prefs-title", "Your privacy choices", 32)
    f.toggle_rows([1, 2, 3])
    f.buttons([("reject", "Reject all", "REJECT", {}), ("save", "Save choices", "SAVE", {})])
    f.pane = "main"
    f.route("pointer", [("do", "prefs-link"), ("do", "reject")], 1)
    f.route("keyboard", [("do", "prefs-link"), ("do", "reject")], 1)
    return f


def euphemism_dismiss(fid, label, breakpoint="desktop"):
    f = Fixture(fid, "CO_PRESENT",
                f"\"{label}\" dismisses the banner with consent implied; the real reject sits beside it.",
                tags=("euphemism",), breakpoint=breakpoint)
    header(f)
    f.buttons([("got-it", label, "ACCEPT", {"emphasisClass": "primary",
                                             "effects": [{"kind": "dismiss", "target": "root"}]}),
               ("reject", "Decline", "REJECT", {})])
    f.route("pointer", [("do", "reject")], 0)
    f.route("keyboard", [("do", "reject")], 0)
    return f


def decoy_reject(fid, breakpoint="desktop"):
    f = Fixture(fid, "MULTI_STEP",
                "A \"Reject all\" link only opens a confirmation blurb; real refusal lives behind Manage cookies.",
                tags=("decoy",), breakpoint=breakpoint, panes=("main", "prefs"))
    header(f)
    f.buttons([accept_button(),
               ("manage", "Manage cookies", "SETTINGS",
                {"effects": [{"kind": "navigate", "target": "prefs"}], "substantive": True})])
    f.control("decoy", "link", "Reject all", (f.x0 + 20, f.y, 120, 24), "REJECT",
              effects=[{"kind": "reveal", "target": "decoy-text"}], actionable=False)
    f.y += 36
    f.text("decoy-text", "Are you sure? Some features will not work.", 24, hidden=True)
    f.pane = "prefs"
    f.y = 56
    f.toggle_rows([1, 2, 3])
    f.buttons([("reject", "Reject all", "REJECT", {}), ("save", "Save choices", "SAVE", {})])
    f.pane = "main"
    f.route("pointer", [("do", "decoy")], 0)
    f.route("keyboard", [("do", "decoy")], 0)
    return f


def decoy_accept_necessary(fid, breakpoint="desktop"):
    f = Fixture(fid, "CO_PRESENT",
                "\"Accept necessary\" is the refusal path under an accepting verb; settings opens a real panel.",
                tags=("decoy",), breakpoint=breakpoint)
    header(f)
    f.buttons([accept_button(),
               ("necessary", "Accept necessary", "REJECT", {}),
               ("settings", "Cookie settings", "SETTINGS",
                {"effects": [{"kind": "reveal", "target": "settings-panel"}], "substantive": True})])
    f.add("settings-panel", "container", (f.x0 + 20, f.y, f.width - 40, 240), visible=False)
    f.toggle_rows([1, 2, 3], parent="settings-panel", hidden=True)
    f.buttons([("save", "Save choices", "SAVE", {"visible": False})], parent="settings-panel")
    f.route("pointer", [("do", "settings")], 0)
    f.route("keyboard", [("do", "settings")], 0)
    return f


def decoy_settings_text(fid, breakpoint="desktop"):
    f = Fixture(fid, "SCROLL_WALL",
                "A settings button only expands prose; the reject control sits below the fold.",
                tags=("decoy", "scrollable-surface"), breakpoint=breakpoint, scrollable=True)
    header(f)
    f.buttons([accept_button(),
               ("settings", "Settings", "SETTINGS", {"effects": [{"kind": "reveal", "target": "settings-text"}]})])
    f.text("settings-text", "We use cookies for analytics and advertising.", 40, hidden=True)
    top = f.y
    depth = f.vh + 400
    f.add("policy-text", "text", (f.x0 + 20, top, f.width - 40, depth - 60 - top),
          label="This notice explains how we and our partners process personal data.")
    f.y = depth - 48
    f.buttons([("reject", "Reject all", "REJECT", {})])
    f.scroll_height = depth + 24
    route = [("scroll", 400), ("do", "reject")]
    f.route("pointer", route, 0)
    f.route("keyboard", route, 0)
    return f


def clipped_at_fold(fid, overhang, breakpoint="desktop"):
    f = Fixture(fid, "SCROLL_WALL",
                f"The reject button straddles the fold with {overhang}px cut off; a reader sees and can click it.",
                tags=("partial-visibility", "scrollable-surface"), breakpoint=breakpoint, scrollable=True)
    header(f)
    f.buttons([accept_button()])
    top = f.y
    reject_y = f.vh - 48 + overhang
    f.add("policy-text", "text", (f.x0 + 20, top, f.width - 40, reject_y - 12 - top),
          label="This notice explains how we and our partners process personal data.")
    f.y = reject_y
    f.buttons([("reject", "Reject all", "REJECT", {})])
    f.truth["reject"]["visible"] = True
    f.truth["reject"]["actionable"] = True
    f.scroll_height = reject_y + 48 + 24
    route = [("scroll", overhang), ("do", "reject")]
    f.route("pointer", route, 0)
    f.route("keyboard", route, 0)
    return f


def occluded(fid, breakpoint="desktop"):
    f = Fixture(fid, "CO_PRESENT",
                "A sticky promo overlay covers the reject button; the snapshot does not model occlusion.",
                tags=("partial-visibility",), breakpoint=breakpoint)
    header(f)
    f.buttons([accept_button(), ("reject", "Reject all", "REJECT", {})])
    f.truth["reject"]["visible"] = False
    f.truth["reject"]["actionable"] = False
    f.route("pointer", [("do", "reject")], 0)
    f.route("keyboard", [("do", "reject")], 0)
    return f


def unreachable_reject(fid, hover=False):
    """Reject exists but cannot be seen: hidden until hover, or below the fold of a fixed surface."""
    note = ("On mobile the reject button only renders on hover" if hover else
            "On mobile the reject button lies below the fold of a surface that cannot scroll")
    f = Fixture(fid, "MULTI_STEP", note + "; settings leads to a second pane.",
                tags=("partial-visibility",), breakpoint="mobile", panes=("main", "prefs"))
    header(f)
    f.buttons([accept_button(),
               ("settings", "Manage settings", "SETTINGS",
                {"effects": [{"kind": "navigate", "target": "prefs"}], "substantive": True})])
    if hover:
        f.control("reject", "button", "Reject all", (f.x0 + 15, f.y, 330, 48), "REJECT", visible=False)
    else:
        f.control("reject", "button", "Reject all", (f.x0 + 15, f.vh + 20, 330, 48), "REJECT")
    f.pane = "prefs"
    f.y = 56
    f.toggle_rows([1, 2, 3])
    f.buttons([("save", "Save choices", "SAVE", {})])
    f.pane = "main"
    f.route("pointer", [("do", "settings")], 0)
    f.route("keyboard", [("do", "settings")], 0)
    return f


def disabled_reject(fid, breakpoint="desktop", save=False):
    f = Fixture(fid, "ACCORDION",
                "A greyed-out reject is visible at once; a category toggle on the same pane unlocks it.",
                tags=("disabled",), breakpoint=breakpoint)
    header(f)
    f.toggle_rows([1, 2, 3], enables=("reject", "save") if save else ("reject",))
    row = [accept_button(), ("reject", "Reject all", "REJECT", {"enabled": False})]
    if save:
        row.append(("save", "Save choices", "SAVE", {"enabled": False}))
    f.buttons(row)
    route = [("do", "toggle-1"), ("do", "reject")]
    f.route("pointer", route, 0)
    f.route("keyboard", route, 0)
    return f


def keyboard_unreachable(fid, breakpoint="desktop", trap=False):
    f = Fixture(fid, "CO_PRESENT",
                "The reject button is removed from tab order; keyboard users must go through settings.",
                tags=("keyboard", "focus-trap") if trap else ("keyboard",), breakpoint=breakpoint,
                panes=("main", "prefs"))
    header(f)
    if trap:
        f.trap()
    f.buttons([accept_button(),
               ("reject", "Reject all", "REJECT", {"tabIndex": -1}),
               ("settings", "Manage settings", "SETTINGS",
                {"effects": [{"kind": "navigate", "target": "prefs"}], "substantive": True})])
    f.pane = "prefs"
    f.y = 56
    f.toggle_rows([1, 2, 3])
    f.buttons([("save", "Save choices", "SAVE", {})])
    f.pane = "main"
    f.route("pointer", [("do", "reject")], 0)
    f.route("keyboard", ([("loop", "trap")] if trap else []) + [("do", "settings")], 0)
    return f


def corpus():
    out = []
    # named fixtures
    out.append(co_present("copresent", "Reject all",
                          note="Accept and reject carry equal weight beside local rationales and a "
                               "persistent change-consent link."))
    out.append(vignette())
    out.append(accordion("accordion"))
    out.append(multi_step("multistep"))
    out.append(multi_step("multistep_trap", trap=True, tags=("multi-step", "focus-trap")))
    out.append(scroll_wall("scrollwall", 2448, trap=True, tags=("scroll-wall", "focus-trap", "scrollable-surface")))
    out.append(censor())

    reject_labels = ["Decline", "Refuse all", "Necessary only", "Deny", "Continue without accepting",
                     "Reject", "Use necessary cookies only", "Do not consent"]
    for i, label in enumerate(reject_labels, start=1):
        out.append(co_present(f"copresent-{i:02d}", label, breakpoint="mobile" if i % 2 == 0 else "desktop",
                              trap=i in (3, 6), settle=150 if i % 3 == 0 else 0, save=i % 4 != 0,
                              reversible=i % 2 == 1, reject_first=i in (5, 7),
                              tags=("co-present", "focus-trap") if i in (3, 6) else ("co-present",)))

    depths = [1300, 1700, 2200, 2700, 1200, 1600, 2000, 3000]
    for i, depth in enumerate(depths, start=1):
        mobile = i > 4
        evh = 600 if i in (2, 6) else None
        tags = ["scroll-wall", "scrollable-surface"] + (["focus-trap"] if i % 2 == 1 else [])
        out.append(scroll_wall(f"scrollwall-{i:02d}", depth, breakpoint="mobile" if mobile else "desktop",
                               trap=i % 2 == 1, evh=evh, tags=tags))

    for i, (depth, mobile, trap, gate) in enumerate(
            [(1, False, True, 250), (2, False, False, 300), (3, False, False, 200), (2, False, True, 150),
             (1, True, False, 300), (2, True, True, 200), (1, True, True, 350), (1, False, False, 0)], start=1):
        out.append(accordion(f"accordion-{i:02d}", depth=depth, breakpoint="mobile" if mobile else "desktop",
                             trap=trap, gate=gate,
                             tags=("accordion", "focus-trap") if trap else ("accordion",)))

    for i, (panes, mobile, trap) in enumerate(
            [(2, False, False), (3, True, False), (4, False, True), (2, True, True), (4, True, False),
             (3, False, True)], start=1):
        out.append(multi_step(f"multistep-{i:02d}", panes=panes, breakpoint="mobile" if mobile else "desktop",
                              trap=trap, tags=("multi-step", "focus-trap") if trap else ("multi-step",)))

    for i, label in enumerate(["Manage experience", "Privacy choices", "Your choices", "See purposes"], start=1):
        out.append(euphemism_settings(f"euphemism-{i:02d}", label, breakpoint="mobile" if i % 2 == 0 else "desktop"))
    out.append(euphemism_dismiss("euphemism-05", "Got it"))
    out.append(euphemism_dismiss("euphemism-06", "OK got it", breakpoint="mobile"))

    out.append(decoy_reject("decoy-01"))
    out.append(decoy_reject("decoy-02", breakpoint="mobile"))
    out.append(decoy_accept_necessary("decoy-03"))
    out.append(decoy_settings_text("decoy-04"))
    out.append(decoy_settings_text("decoy-05", breakpoint="mobile"))

    out.append(clipped_at_fold("partial-01", 20))
    out.append(clipped_at_fold("partial-02", 12, breakpoint="mobile"))
    out.append(clipped_at_fold("partial-03", 30))
    out.append(occluded("partial-04"))
    out.append(unreachable_reject("partial-05"))
    out.append(unreachable_reject("partial-06", hover=True))

    out.append(disabled_reject("disabled-01"))
    out.append(disabled_reject("disabled-02", breakpoint="mobile"))
    out.append(disabled_reject("disabled-03", save=True))
    out.append(keyboard_unreachable("keyboard-01"))
    out.append(keyboard_unreachable("keyboard-02", breakpoint="mobile"))
    out.append(keyboard_unreachable("keyboard-03", trap=True))
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.json"):
        old.unlink()
    fixtures = corpus()
    ids = [f.id for f in fixtures]
    assert len(ids) == len(set(ids)) == 60, len(ids)
    entries = []
    for f in fixtures:
        snapshot, entry = f.finish()
        (OUT / entry["snapshot"]).write_text(json.dumps(snapshot, indent=2) + "\n")
        entries.append(entry)
    manifest = {"version": 1, "schemaVersion": 1, "fixtures": entries}
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(entries)} fixtures to {OUT.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
