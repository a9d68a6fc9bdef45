from .functor import ActionContext, BimoduleSpace, LinearMap, evaluate_events, evaluate_morphism, region_labels

__all__ = [
    "ActionContext",
    "BimoduleSpace",
    "LinearMap",
    "evaluate_events",
    "evaluate_morphism",
    "region_labels",
]
