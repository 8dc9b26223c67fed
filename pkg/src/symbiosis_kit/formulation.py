"""Natural-language formulation rendering for objectives and measurement goals.

Each template concatenates the node's free-text fields with fixed connectives;
field text carries its own internal punctuation. The relationship clause is
appended only when the corresponding relationship list is nonempty.
"""

from __future__ import annotations

from .model import BusinessObjective, MeasurementGoal, Model, ScopeRef


class MissingFieldError(ValueError):
    """A template placeholder has no usable source value."""

    def __init__(self, node_id: str, field: str) -> None:
        super().__init__(f"{node_id}: template field {field!r} is empty or unresolved")
        self.node_id = node_id
        self.field = field


def _need(node_id: str, field: str, value: str) -> str:
    if not value:
        raise MissingFieldError(node_id, field)
    return value


def _join_names(names: list[str]) -> str:
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def _viewpoint_names(model: Model, node_id: str, ids: tuple[str, ...]) -> str:
    if not ids:
        raise MissingFieldError(node_id, "viewpoint")
    names = []
    for sid in ids:
        stakeholder = model.stakeholders.get(sid)
        if stakeholder is None or not stakeholder.name:
            raise MissingFieldError(node_id, "viewpoint")
        names.append(stakeholder.name)
    return _join_names(names)


def _scope_text(model: Model, node_id: str, scope: ScopeRef | None) -> str:
    if scope is None:
        raise MissingFieldError(node_id, "scope")
    if scope.description:
        return scope.description
    universe = model.universes.get(scope.universe)
    if scope.selection is None:
        if universe is None:
            raise MissingFieldError(node_id, "scope")
        return f"all facets of {universe.id}"
    return ", ".join(scope.selection)


def _objective_sentence(model: Model, bo: BusinessObjective) -> str:
    viewpoint = _viewpoint_names(model, bo.id, bo.viewpoint)
    obj = _need(bo.id, "object", bo.object)
    purpose = _need(bo.id, "purpose", bo.purpose)
    context = _need(bo.id, "context", bo.context)
    scope = _scope_text(model, bo.id, bo.scope)
    if bo.refines is None:
        sentence = (
            f"One of our primary business objectives is to {purpose} {obj} {scope}, "
            f"from the viewpoint of the {viewpoint}, "
            f"while taking into account {context}."
        )
        if bo.depends_on:
            sentence += (
                " This business objective depends on the achievement of "
                + ", ".join(bo.depends_on)
            )
        if bo.affects:
            sentence += " Achieving this business objective will affect " + ", ".join(
                bo.affects
            )
        return sentence
    sentence = (
        f"Analyse the {obj} including all {scope} "
        f"for the purpose of {purpose} "
        f"from the viewpoint of the {viewpoint}, {context}."
    )
    if bo.depends_on:
        sentence += " This objective depends on " + ", ".join(bo.depends_on)
    if bo.affects:
        sentence += " This objective is expected to affect " + ", ".join(bo.affects)
    return sentence


def _goal_sentence(model: Model, mg: MeasurementGoal) -> str:
    viewpoint = _viewpoint_names(model, mg.id, mg.viewpoint)
    obj = _need(mg.id, "object", mg.object)
    scope = _need(mg.id, "scope", mg.scope)
    purpose = _need(mg.id, "purpose", mg.purpose)
    focus = _need(mg.id, "focus", mg.focus)
    context = _need(mg.id, "context", mg.context)
    if not mg.criteria:
        raise MissingFieldError(mg.id, "criteria")
    criteria = ", ".join(mg.criteria)
    sentence = (
        f"Analyse the {obj} and specifically the {scope}, "
        f"for the purpose of {purpose} {focus}, "
        f"with respect to {criteria}, "
        f"from the viewpoint of the {viewpoint} "
        f"taking into account {context}."
    )
    if mg.related:
        sentence += " This measurement goal is expected to impact " + ", ".join(
            mg.related
        )
    return sentence


def render_formulation(model: Model, node_id: str) -> str:
    """Render the formulation sentence for an objective or measurement goal."""
    if node_id in model.objectives:
        return _objective_sentence(model, model.objectives[node_id])
    if node_id in model.goals:
        return _goal_sentence(model, model.goals[node_id])
    raise KeyError(node_id)


def renderable_ids(model: Model) -> list[str]:
    """All ids render_formulation accepts, in sorted order."""
    return sorted(list(model.objectives) + list(model.goals))
