import argparse
import json
import logging
import re
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from src.models.error_model import ConfigError, ErrorResponse, MoebiusError, ParseError
from src.models.render_model import RenderFormat, RenderSpec
from src.models.slope_model import BoundarySlope, Curve, FareyVertex, UnimodularMatrix
from src.services.bundle_service import BundleDiscService
from src.services.collar_service import CollarService
from src.services.render_service import RenderService
from src.services.slope_service import SlopeService
from src.services.tree_service import MoebiusTreeService
from src.services.verification_service import VerificationService
from src.utils.config import Config

_INT = r'\s*([+-]?\d+)\s*'
_SLASH_PAIR = re.compile(_INT + '/' + _INT)
_PAREN_PAIR = re.compile(r'\s*\(' + _INT + ',' + _INT + r'\)\s*')
_VERTEX = re.compile(_INT + ':' + _INT)
_MATRIX = re.compile(_INT + ',' + _INT + ';' + _INT + ',' + _INT)

_USAGE_ERRORS = (ParseError, ConfigError)

# '-5:3', '-4/-1' and '-1,0;0,-1' are values, not options
_SIGNED_ARGUMENT = re.compile(r'^-\d')


class SignedArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reads arguments starting with a minus sign and a digit as positionals."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _SIGNED_ARGUMENT


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def odd_positive_int(text: str) -> int:
    value = positive_int(text)
    if value % 2 == 0:
        raise argparse.ArgumentTypeError(f"must be odd, got {value}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be at least 0, got {value}")
    return value


def _error_position(text: str, allowed: str) -> int:
    for position, char in enumerate(text):
        if not (char.isdigit() or char.isspace() or char in '+-' + allowed):
            return position
    return len(text)


def parse_curve(text: str) -> Curve:
    """Read "u/v" or "(u,v)" as an integer pair, without reduction."""
    match = _SLASH_PAIR.fullmatch(text) or _PAREN_PAIR.fullmatch(text)
    if not match:
        raise ParseError(f"Expected 'u/v' or '(u,v)', got {text!r}", text, _error_position(text, '/(),'))
    return int(match.group(1)), int(match.group(2))


def parse_slope(text: str, slope_service: Optional[SlopeService] = None) -> BoundarySlope:
    u, v = parse_curve(text)
    return (slope_service or SlopeService()).reduce_slope(u, v)


def parse_vertex(text: str) -> FareyVertex:
    match = _VERTEX.fullmatch(text)
    if not match:
        raise ParseError(f"Expected 'p:q', got {text!r}", text, _error_position(text, ':'))
    return FareyVertex.of(int(match.group(1)), int(match.group(2)))


def parse_matrix(text: str) -> UnimodularMatrix:
    match = _MATRIX.fullmatch(text)
    if not match:
        raise ParseError(f"Expected 'a,b;c,d', got {text!r}", text, _error_position(text, ',;'))
    return UnimodularMatrix(*(int(group) for group in match.groups()))


def format_slope(slope: BoundarySlope) -> str:
    return f"{slope.u}/{slope.v}"


def format_vertex(vertex: FareyVertex) -> str:
    return f"{vertex.p}:{vertex.q}"


class CliController:
    """Parses a command line, dispatches to the services and applies the exit-code contract."""

    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.parser = self.build_parser()
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('CliController')
        return logger

    def build_parser(self) -> argparse.ArgumentParser:
        parser = SignedArgumentParser(
            prog='moebius',
            description='Exact computations with the Moebius band tree and once-punctured torus bundles.'
        )
        parser.add_argument('--config', metavar='FILE', help='KEY=VALUE configuration file')
        parser.add_argument('--output', choices=['text', 'json'], default='text')
        parser.add_argument('--verbose', action='store_true', help='log at DEBUG level')
        commands = parser.add_subparsers(dest='command', required=True)

        for name, help_text in (('genus', 'genus of the one-sided surface with this slope'),
                                ('compress', 'slope after one boundary compression'),
                                ('bands', 'band decomposition of the surface')):
            command = commands.add_parser(name, help=help_text)
            command.add_argument('slope', help="'u/v' or '(u,v)'")

        command = commands.add_parser('path', help='tree geodesic between two vertices')
        command.add_argument('start', help="'p:q'")
        command.add_argument('end', help="'p:q'")

        command = commands.add_parser('regions', help='surface between an inner and an outer curve')
        command.add_argument('inner')
        command.add_argument('outer')

        command = commands.add_parser('classify', help='branch of a tree vertex')
        command.add_argument('vertex', help="'p:q'")

        command = commands.add_parser('neighbors', help='tree neighbors inside a bound')
        command.add_argument('vertex', help="'p:q'")
        command.add_argument('--bound', type=positive_int, required=True)

        command = commands.add_parser('tree-export', help='export a box of the tree')
        command.add_argument('--p-bound', type=positive_int)
        command.add_argument('--q-bound', type=odd_positive_int)
        command.add_argument('--depth', type=non_negative_int)
        command.add_argument('--format', choices=[f.value for f in RenderFormat], default='dot')

        command = commands.add_parser('bundle-decide', help='decide the quadrilateral disc for a monodromy')
        command.add_argument('matrix', help="'a,b;c,d'")
        # const 0 marks a bare --check-height, which uses the configured default height
        command.add_argument('--check-height', type=positive_int, nargs='?', const=0)
        command.add_argument('--brute-force', action='store_true')

        command = commands.add_parser('bundle-scan', help='compare the decision with the parity criterion')
        command.add_argument('--entry-bound', type=positive_int, required=True)

        command = commands.add_parser('verify', help='check the tree claim and observations on a box')
        command.add_argument('--p-bound', type=positive_int, required=True)
        command.add_argument('--q-bound', type=odd_positive_int, required=True)
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else 2

        json_mode = args.output == 'json'
        try:
            overrides = {'LOG_LEVEL': 'DEBUG'} if args.verbose else None
            self._build_services(Config(args.config, overrides))
            self.logger.debug(f"▶️ Running {args.command}")
            document, lines, code = getattr(self, '_cmd_' + args.command.replace('-', '_'))(args)

            if isinstance(document, str):
                self.stdout.write(document)
            elif json_mode:
                self.stdout.write(json.dumps(document, indent=2) + "\n")
            else:
                self.stdout.write("".join(line + "\n" for line in lines))
            return code

        except _USAGE_ERRORS as e:
            return self._fail(e, 2, json_mode)

        except MoebiusError as e:
            return self._fail(e, 1, json_mode)

        except Exception as e:
            self.logger.error(f"❌ Unexpected failure in {args.command}: {str(e)}", exc_info=True)
            return self._fail(e, 1, json_mode)

    def _fail(self, error: Exception, code: int, json_mode: bool) -> int:
        response = ErrorResponse.from_exception(error)
        self.logger.warning(f"⚠️ {response.code}: {response.error}")
        self.stderr.write(f"error: {response.code}: {response.error}\n")
        if json_mode:
            self.stdout.write(json.dumps(response.to_dict(), indent=2) + "\n")
        return code

    def _build_services(self, config: Config):
        self.config = config
        self.slope_service = SlopeService(config)
        self.tree_service = MoebiusTreeService(config, self.slope_service)
        self.collar_service = CollarService(config, self.tree_service)
        self.verification_service = VerificationService(config, self.tree_service)
        self.render_service = RenderService(config, self.tree_service)
        self.bundle_service = BundleDiscService(config, self.slope_service)

    def _vertex(self, text: str):
        return self.slope_service.as_tree_vertex(parse_vertex(text))

    # Each command returns (document, text lines, exit code); a str document is written verbatim.

    def _cmd_genus(self, args) -> Tuple[Dict[str, Any], List[str], int]:
        slope = parse_slope(args.slope, self.slope_service)
        genus = self.tree_service.genus(slope)
        return {'slope': slope.to_dict(), 'genus': genus}, [str(genus)], 0

    def _cmd_compress(self, args):
        slope = parse_slope(args.slope, self.slope_service)
        compressed = self.collar_service.compress(slope)
        return {'slope': slope.to_dict(), 'compressed': compressed.to_dict()}, [format_slope(compressed)], 0

    def _cmd_bands(self, args):
        slope = parse_slope(args.slope, self.slope_service)
        bands = self.collar_service.band_decomposition(slope)
        document = {'slope': slope.to_dict(), 'bands': [b.to_dict() for b in bands]}
        return document, [str(b) for b in bands], 0

    def _cmd_path(self, args):
        path = self.tree_service.path_between(self._vertex(args.start), self._vertex(args.end))
        return path.to_dict(), [" ".join(format_vertex(v) for v in path), f"length {path.length}"], 0

    def _cmd_regions(self, args):
        decomposition = self.collar_service.region_decomposition(parse_curve(args.inner), parse_curve(args.outer))
        pulled = self.collar_service.pull_back(decomposition)
        document = decomposition.to_dict()
        document['original_slopes'] = [list(curve) for curve in pulled]
        lines = [
            f"genus {decomposition.genus}",
            f"normalizer {decomposition.normalizer}",
            "slopes " + " ".join(format_slope(s) for s in decomposition.slopes),
            "bands " + " ".join(str(b) for b in decomposition.bands),
            "original " + " ".join(f"({x},{y})" for x, y in pulled),
        ]
        return document, lines, 0

    def _cmd_classify(self, args):
        branch = self.tree_service.classify(self._vertex(args.vertex))
        return branch.to_dict(), [f"{branch.label.value} {format_vertex(branch.anchor)}"], 0

    def _cmd_neighbors(self, args):
        found = self.tree_service.neighbors(self._vertex(args.vertex), args.bound)
        return {'neighbors': [v.to_dict() for v in found]}, [format_vertex(v) for v in found], 0

    def _cmd_tree_export(self, args):
        spec = RenderSpec(
            p_bound=args.p_bound if args.p_bound is not None else self.config.EXPORT_P_BOUND,
            q_bound=args.q_bound if args.q_bound is not None else self.config.EXPORT_Q_BOUND,
            format=RenderFormat.from_string(args.format),
            depth=args.depth
        )
        return self.render_service.export_tree(spec), [], 0

    def _cmd_bundle_decide(self, args):
        monodromy = parse_matrix(args.matrix)
        bundle = self.bundle_service
        kind = bundle.classify_monodromy(monodromy)
        document = {
            'monodromy': monodromy.to_dict(),
            'type': kind.value,
            'form': bundle.form_of(monodromy).to_dict(),
        }

        height = args.check_height or self.config.DEFAULT_CHECK_HEIGHT
        if args.brute_force:
            verdict = bundle.decide_by_search(monodromy, height)
            document['verdict'] = verdict.to_dict()
            return document, [kind.value, str(verdict)], 0

        verdict = bundle.decide(monodromy)
        document['verdict'] = verdict.to_dict()
        lines = [kind.value, str(verdict)]
        if args.check_height is not None:
            found = bundle.brute_search(monodromy, height)
            # a bounded search can miss a witness but must never find one the decision denies
            agrees = found is None or verdict.exists
            document['check'] = {
                'height': height,
                'witness': list(found[0]) if found else None,
                'value': found[1] if found else None,
                'agrees': agrees
            }
            if found:
                lines.append(f"check up to height {height}: witness ({found[0][0]},{found[0][1]}), value {found[1]}")
            else:
                lines.append(f"check up to height {height}: no witness")
            if not agrees:
                self.logger.error(f"❌ Brute force contradicts the decision for {monodromy}")
                return document, lines, 1
        return document, lines, 0

    def _cmd_bundle_scan(self, args):
        report = self.bundle_service.scan_matrices(args.entry_bound)
        lines = [
            f"matrices {report.total}",
            f"exists {report.exists_count}",
            f"not exists {report.not_exists_count}",
            f"criterion {report.criterion_count}",
            f"disagreements {len(report.disagreements)}",
        ]
        lines.extend(str(m) for m in report.disagreements)
        return report.to_dict(), lines, 1 if report.disagreements else 0

    def _cmd_verify(self, args):
        tree_report, observations = self.verification_service.run_suite(args.p_bound, args.q_bound)
        passed = tree_report.is_tree and observations.passed
        document = {'tree': tree_report.to_dict(), 'observations': observations.to_dict(), 'passed': passed}
        lines = [
            f"vertices {tree_report.vertex_count}, edges {tree_report.edge_count}",
            f"connected {tree_report.connected}",
            f"acyclic {tree_report.acyclic}",
            f"odd parent unique {tree_report.odd_parent_unique}",
            f"distance mismatches {len(observations.distance_mismatches)}",
            f"monotonicity failures {len(observations.monotonicity_failures)}",
            f"branch mismatches {len(observations.branch_mismatches)}",
            f"branch ties {len(observations.branch_ties)}",
            f"edge slope failures {len(observations.edge_slope_failures)}",
            "passed" if passed else "FAILED",
        ]
        return document, lines, 0 if passed else 1
