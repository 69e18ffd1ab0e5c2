from dataclasses import asdict, dataclass
from typing import Dict, Mapping, Optional, Tuple

from django.core.exceptions import ValidationError

from apps.permcore.conf import lab_setting

FORMATS = ('csv', 'json', 'xlsx', 'text')


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines the output of one command run"""
    command: str
    kind: Optional[str] = None
    n: Optional[int] = None
    j: Optional[int] = None
    a: Optional[int] = None
    b: Optional[float] = None
    x: Optional[float] = None
    which: Optional[str] = None
    grid: Optional[int] = None
    extrema: Optional[bool] = None
    s: Optional[float] = None
    method: Optional[str] = None
    engine: Optional[str] = None
    stat: Optional[str] = None
    mode: Optional[str] = None
    n_list: Optional[Tuple[int, ...]] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    format: str = 'csv'
    out: Optional[str] = None
    threads: int = 1

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValidationError(f"Unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        if self.format == 'xlsx' and not self.out:
            raise ValidationError("xlsx output needs --out")
        if self.threads < 1:
            raise ValidationError(f"--threads must be at least 1, got {self.threads}")

    @classmethod
    def from_options(cls, command: str, options: Mapping) -> 'RunConfig':
        fields = {name: options.get(name) for name in cls.__dataclass_fields__ if name != 'command'}
        fields['format'] = fields['format'] or 'csv'
        if fields['n_list'] is not None:
            fields['n_list'] = tuple(fields['n_list'])
        if fields['threads'] is None:
            fields['threads'] = lab_setting('THREADS')
        if 'seed' in options and fields['seed'] is None:
            fields['seed'] = lab_setting('DEFAULT_SEED')
        return cls(command=command, **fields)

    def provenance(self) -> Dict:
        """The fields that shape the result; output routing and threads are left out"""
        skipped = {'format', 'out', 'threads'}
        return {name: value for name, value in asdict(self).items()
                if name not in skipped and value is not None}
