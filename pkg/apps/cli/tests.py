import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from openpyxl import load_workbook

from .base import INVALID_ARGUMENTS, RESOURCE_LIMIT
from .config import RunConfig
from .runner import run_cli


def run(*args) -> str:
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class RunnerTests(SimpleTestCase):
    def quiet(self, argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run_cli(argv)
        return code, out.getvalue(), err.getvalue()

    def test_success(self):
        code, out, _ = self.quiet(['density', '--which', 'f_card', '--b', '0.5', '--grid', '4'])
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('t,density\n'))

    def test_resource_guard_exit_code(self):
        code, out, err = self.quiet(['brute', '--kind', 'card', '--n', '9'])
        self.assertEqual(code, RESOURCE_LIMIT)
        self.assertEqual(out, '')
        self.assertIn('8', err)

    def test_invalid_argument_exit_codes(self):
        self.assertEqual(self.quiet(['brute', '--kind', 'riffle', '--n', '3'])[0], INVALID_ARGUMENTS)
        self.assertEqual(self.quiet(['brute', '--kind', 'card'])[0], INVALID_ARGUMENTS)
        self.assertEqual(self.quiet(['marginal', '--kind', 'insertion', '--n', '4'])[0], INVALID_ARGUMENTS)
        self.assertEqual(self.quiet(['density', '--which', 'f_card', '--b', '1.5'])[0], INVALID_ARGUMENTS)

    def test_unknown_subcommand(self):
        self.assertEqual(self.quiet(['riffle'])[0], INVALID_ARGUMENTS)
        self.assertEqual(self.quiet(['migrate'])[0], INVALID_ARGUMENTS)
        self.assertEqual(self.quiet([])[0], INVALID_ARGUMENTS)


class RunConfigTests(SimpleTestCase):
    def test_xlsx_needs_out(self):
        with self.assertRaises(ValidationError):
            RunConfig(command='brute', format='xlsx')

    def test_provenance_leaves_out_routing(self):
        config = RunConfig(command='sample', kind='card', n=5, samples=10, seed=7, out='x.csv', threads=4)
        self.assertEqual(config.provenance(), {'command': 'sample', 'kind': 'card', 'n': 5, 'samples': 10, 'seed': 7})

    def test_seed_defaults_only_for_seeded_commands(self):
        seeded = RunConfig.from_options('sample', {'kind': 'card', 'n': 5, 'samples': 10, 'seed': None})
        self.assertEqual(seeded.seed, 271828182)
        unseeded = RunConfig.from_options('brute', {'kind': 'card', 'n': 5})
        self.assertIsNone(unseeded.seed)

    def test_threads(self):
        with self.assertRaises(ValidationError):
            RunConfig.from_options('brute', {'kind': 'card', 'n': 5, 'threads': 0})


class DensityCommandTests(SimpleTestCase):
    def test_default_grid(self):
        lines = run('density', '--which', 'f_card', '--b', '0.5').splitlines()
        self.assertEqual(lines[0], 't,density')
        self.assertEqual(len(lines), 1002)
        self.assertEqual(lines[1].split(',')[0], '0')
        self.assertEqual(lines[-1].split(',')[0], '1')

    def test_byte_identical_reruns(self):
        first = run('density', '--which', 'h_card', '--x', '0.3', '--grid', '250')
        second = run('density', '--which', 'h_card', '--x', '0.3', '--grid', '250')
        self.assertEqual(first, second)

    def test_parameter_flag_follows_density(self):
        with self.assertRaises(CommandError) as caught:
            run('density', '--which', 'h_pos', '--b', '0.5')
        self.assertEqual(caught.exception.returncode, INVALID_ARGUMENTS)


class ExactCommandTests(SimpleTestCase):
    def test_brute_text_format(self):
        lines = run('brute', '--kind', 'card', '--n', '3', '--format', 'text').splitlines()
        self.assertEqual(lines[0], '1,2,3\t4\t27')
        self.assertEqual(sum(int(line.split('\t')[1]) for line in lines), 27)

    def test_brute_and_evolve_agree(self):
        self.assertEqual(run('brute', '--kind', 'pos', '--n', '4'), run('evolve', '--kind', 'pos', '--n', '4'))

    def test_marginal_matrix_header(self):
        lines = run('marginal', '--kind', 'card', '--n', '4').splitlines()
        self.assertEqual(lines[0], 'j\\a,1,2,3,4')
        self.assertEqual(len(lines), 5)

    def test_marginal_entry(self):
        lines = run('marginal', '--kind', 'card', '--n', '3', '--j', '1', '--a', '2').splitlines()
        self.assertEqual(lines[0], 'j,a,probability')
        j, a, value = lines[1].split(',')
        self.assertEqual((j, a), ('1', '2'))
        self.assertAlmostEqual(float(value), 10 / 27, places=15)

    def test_marginal_needs_both_indices(self):
        with self.assertRaises(CommandError) as caught:
            run('marginal', '--kind', 'card', '--n', '3', '--j', '1')
        self.assertEqual(caught.exception.returncode, INVALID_ARGUMENTS)

    def test_stats_columns(self):
        lines = run('stats', '--kind', 'pos', '--n', '4').splitlines()
        self.assertEqual(lines[0], 'statistic,exact,value')
        self.assertTrue(lines[-1].startswith('identity_asymptotic_ratio,'))

    def test_text_format_needs_a_table(self):
        with self.assertRaises(CommandError) as caught:
            run('stats', '--kind', 'card', '--n', '3', '--format', 'text')
        self.assertEqual(caught.exception.returncode, INVALID_ARGUMENTS)

    def test_resource_guard(self):
        with self.assertRaises(CommandError) as caught:
            run('evolve', '--kind', 'card', '--n', '12')
        self.assertEqual(caught.exception.returncode, RESOURCE_LIMIT)


class OutputFormatTests(SimpleTestCase):
    def test_json_carries_provenance(self):
        payload = json.loads(run('tvbound', '--grid', '101', '--format', 'json'))
        self.assertEqual(payload['command'], 'tvbound')
        self.assertEqual(payload['which'], 'f_card')
        self.assertEqual(payload['grid'], 101)
        self.assertEqual(payload['columns'], ['value', 'argmax_b'])
        self.assertAlmostEqual(payload['rows'][0]['value'], 0.0779, places=4)

    def test_csv_provenance_line(self):
        lines = run('sample', '--kind', 'card', '--n', '5', '--j', '2', '--samples', '100').splitlines()
        self.assertEqual(lines[0], '# command=sample,kind=card,n=5,j=2,samples=100,seed=271828182')
        self.assertEqual(lines[1], 'a,value,stderr')
        self.assertEqual(len(lines), 7)

    def test_sample_reproducible_across_threads(self):
        args = ('sample', '--kind', 'pos', '--n', '30', '--stat', 'derangement', '--samples', '500', '--seed', '11')
        self.assertEqual(run(*args, '--threads', '1'), run(*args, '--threads', '4'))

    def test_sample_needs_exactly_one_target(self):
        with self.assertRaises(CommandError):
            run('sample', '--kind', 'card', '--n', '5', '--samples', '100')

    def test_converge(self):
        lines = run('converge', '--kind', 'card', '--b', '0', '--x', '1', '--n-list', '2', '4').splitlines()
        self.assertTrue(lines[0].startswith('# command=converge,kind=card,b=0.0,x=1.0'))
        self.assertIn('n_list=2 4', lines[0])
        self.assertEqual(lines[1], 'n,finite,limit,abs_error')
        self.assertEqual(len(lines), 4)

    def test_xlsx_needs_out(self):
        with self.assertRaises(CommandError) as caught:
            run('tvbound', '--grid', '11', '--format', 'xlsx')
        self.assertEqual(caught.exception.returncode, INVALID_ARGUMENTS)

    def test_xlsx_workbook(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'expect.xlsx')
            out = run('expect', '--which', 'E_pos_card', '--grid', '4', '--format', 'xlsx', '--out', path)
            self.assertEqual(out, '')
            wb = load_workbook(path)
            ws = wb['expect']
            self.assertEqual([cell.value for cell in ws[1]], ['s', 'value', 'quadrature'])
            self.assertTrue(ws['A1'].font.bold)
            self.assertEqual(ws.max_row, 6)
            meta = {row[0].value: row[1].value for row in wb['provenance'].iter_rows()}
            self.assertEqual(meta['which'], 'E_pos_card')

    def test_out_file_matches_stdout(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'grid.csv')
            self.assertEqual(run('density', '--which', 'f_pos', '--b', '0.2', '--grid', '10', '--out', path), '')
            with open(path, encoding='utf-8') as handle:
                self.assertEqual(handle.read(), run('density', '--which', 'f_pos', '--b', '0.2', '--grid', '10'))

    def test_expect_extrema(self):
        lines = run('expect', '--which', 'E_card_card', '--extrema').splitlines()
        self.assertEqual(lines[0], 'extremum,s,value')
        self.assertTrue(lines[1].startswith('max,1,'))
