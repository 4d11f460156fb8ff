"""Run configuration: one TOML file, overridden by command-line flags.

Sections map one-to-one onto the dataclasses they fill::

    [provider]   -> ProviderConfig
    [judge]      temperature for the semantic judge
    [pipeline]   -> PipelineConfig / Thresholds
    [paths]      cache_dir, corpus, output_dir
    [offline]    enabled, provider_fixture, semantic_fixture
    [evaluate]   workers, compare, timestamp

Relative paths in the file are resolved against the file's own directory.
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from sentsimp.agents import ProviderConfig
from sentsimp.orchestrator import PipelineConfig, Thresholds


class ConfigError(ValueError):
    pass


def _data_path(name: str) -> Path:
    return Path(__file__).parent / "data" / name


@dataclass(frozen=True)
class OfflineConfig:
    enabled: bool = False
    provider_fixture: Path = field(default_factory=lambda: _data_path("desk10_provider.jsonl"))
    semantic_fixture: Path = field(default_factory=lambda: _data_path("desk10_semantic.jsonl"))
    echo: bool = True  # unscripted queries come back unchanged


@dataclass(frozen=True)
class RunConfig:
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    judge_temperature: float = 0.0
    cache_dir: Path | None = None
    corpus_path: Path | None = None
    output_dir: Path = Path("reports")
    offline: OfflineConfig = field(default_factory=OfflineConfig)
    workers: int = 1
    compare: bool = False
    timestamp: str | None = None

    def to_dict(self) -> dict:
        """JSON-friendly view, echoed into report metadata."""
        def plain(v):
            if isinstance(v, Path):
                return str(v)
            if isinstance(v, dict):
                return {k: plain(x) for k, x in v.items()}
            return v

        return plain({
            "provider": asdict(self.provider),
            "pipeline": asdict(self.pipeline),
            "judge_temperature": self.judge_temperature,
            "cache_dir": self.cache_dir,
            "corpus_path": self.corpus_path,
            "output_dir": self.output_dir,
            "offline": asdict(self.offline),
            "workers": self.workers,
            "compare": self.compare,
            "timestamp": self.timestamp,
        })


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def _known(sec: dict, cls, name: str) -> dict:
    allowed = {f.name for f in fields(cls)}
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")
    return sec


def _path(value, base: Path) -> Path:
    p = Path(value).expanduser()
    return p if p.is_absolute() else base / p


def from_mapping(doc: dict, base: Path = Path(".")) -> RunConfig:
    try:
        provider = ProviderConfig(**_known(_section(doc, "provider"), ProviderConfig, "provider"))

        pipe = dict(_section(doc, "pipeline"))
        tkeys = {f.name for f in fields(Thresholds)}
        thresholds = Thresholds(**{k: pipe.pop(k) for k in list(pipe) if k in tkeys})
        pipeline = PipelineConfig(thresholds=thresholds, **_known(pipe, PipelineConfig, "pipeline"))

        judge = _section(doc, "judge")
        _known_keys(judge, {"temperature"}, "judge")

        paths = _section(doc, "paths")
        _known_keys(paths, {"cache_dir", "corpus", "output_dir"}, "paths")

        off = dict(_section(doc, "offline"))
        _known(off, OfflineConfig, "offline")
        for key in ("provider_fixture", "semantic_fixture"):
            if key in off:
                off[key] = _path(off[key], base)
        offline = OfflineConfig(**off)

        ev = _section(doc, "evaluate")
        _known_keys(ev, {"workers", "compare", "timestamp"}, "evaluate")
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    return RunConfig(
        provider=provider,
        pipeline=pipeline,
        judge_temperature=float(judge.get("temperature", 0.0)),
        cache_dir=_path(paths["cache_dir"], base) if "cache_dir" in paths else None,
        corpus_path=_path(paths["corpus"], base) if "corpus" in paths else None,
        output_dir=_path(paths.get("output_dir", "reports"), base),
        offline=offline,
        workers=int(ev.get("workers", 1)),
        compare=bool(ev.get("compare", False)),
        timestamp=ev.get("timestamp"),
    )


def _known_keys(sec: dict, allowed: set[str], name: str) -> None:
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")


def load_config(path) -> RunConfig:
    path = Path(path).expanduser()
    try:
        with path.open("rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return from_mapping(doc, base=path.parent)


def with_overrides(
    cfg: RunConfig,
    *,
    cache_dir=None,
    corpus=None,
    output_dir=None,
    offline: bool | None = None,
    single_agent: bool | None = None,
    compare: bool | None = None,
    max_iterations: int | None = None,
    threshold_semantic: float | None = None,
    threshold_lexical: float | None = None,
    workers: int | None = None,
    timestamp: str | None = None,
) -> RunConfig:
    """Apply flag values over ``cfg``; ``None`` means the flag was not given."""
    t = cfg.pipeline.thresholds
    if threshold_semantic is not None:
        t = replace(t, semantic_accept=threshold_semantic)
    if threshold_lexical is not None:
        t = replace(t, lexical_accept_max=threshold_lexical)
    pipeline = replace(cfg.pipeline, thresholds=t)
    if max_iterations is not None:
        pipeline = replace(pipeline, max_iterations=max_iterations)
    if single_agent is not None:
        pipeline = replace(pipeline, single_agent_mode=single_agent)

    changes = {"pipeline": pipeline}
    if cache_dir is not None:
        changes["cache_dir"] = Path(cache_dir).expanduser()
    if corpus is not None:
        changes["corpus_path"] = Path(corpus).expanduser()
    if output_dir is not None:
        changes["output_dir"] = Path(output_dir).expanduser()
    if offline is not None:
        changes["offline"] = replace(cfg.offline, enabled=offline)
    if compare is not None:
        changes["compare"] = compare
    if workers is not None:
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
        changes["workers"] = workers
    if timestamp is not None:
        changes["timestamp"] = timestamp
    return replace(cfg, **changes)
