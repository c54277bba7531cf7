/** Reader for the 16-column sweep CSV contract. */

export const CSV_COLUMNS = [
  "sweep_id", "scheme", "seed", "sweep_value", "vehicle_id", "data_size_bits",
  "cycle_density", "local_cpu", "split", "rate_bps", "t_local_s", "t_offload_s",
  "t_completion_s", "energy_j", "objective_s", "outer_iterations",
] as const;

export interface SweepRow {
  sweep_id: string;
  scheme: string;
  seed: number;
  sweep_value: number;
  vehicle_id: number;
  data_size_bits: number;
  cycle_density: number;
  local_cpu: number;
  split: number;
  rate_bps: number;
  t_local_s: number;
  t_offload_s: number;
  t_completion_s: number;
  energy_j: number;
  objective_s: number;
  outer_iterations: number;
}

export class CsvError extends Error {}

function parseNumber(text: string, column: string, line: number): number {
  if (text === "inf") return Infinity;
  if (text === "-inf") return -Infinity;
  if (text === "nan") return NaN;
  const value = Number(text);
  if (text === "" || Number.isNaN(value)) {
    throw new CsvError(`line ${line}: column ${column} is not numeric: ${JSON.stringify(text)}`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new CsvError("empty CSV");
  const header = lines[0].split(",");
  for (const column of CSV_COLUMNS) {
    if (!header.includes(column)) {
      throw new CsvError(`missing column ${column}`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const rows: SweepRow[] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const parts = lines[ln].split(",");
    if (parts.length !== header.length) {
      throw new CsvError(`line ${ln + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const cell = (name: string) => parts[index.get(name)!];
    rows.push({
      sweep_id: cell("sweep_id"),
      scheme: cell("scheme"),
      seed: parseNumber(cell("seed"), "seed", ln + 1),
      sweep_value: parseNumber(cell("sweep_value"), "sweep_value", ln + 1),
      vehicle_id: parseNumber(cell("vehicle_id"), "vehicle_id", ln + 1),
      data_size_bits: parseNumber(cell("data_size_bits"), "data_size_bits", ln + 1),
      cycle_density: parseNumber(cell("cycle_density"), "cycle_density", ln + 1),
      local_cpu: parseNumber(cell("local_cpu"), "local_cpu", ln + 1),
      split: parseNumber(cell("split"), "split", ln + 1),
      rate_bps: parseNumber(cell("rate_bps"), "rate_bps", ln + 1),
      t_local_s: parseNumber(cell("t_local_s"), "t_local_s", ln + 1),
      t_offload_s: parseNumber(cell("t_offload_s"), "t_offload_s", ln + 1),
      t_completion_s: parseNumber(cell("t_completion_s"), "t_completion_s", ln + 1),
      energy_j: parseNumber(cell("energy_j"), "energy_j", ln + 1),
      objective_s: parseNumber(cell("objective_s"), "objective_s", ln + 1),
      outer_iterations: parseNumber(cell("outer_iterations"), "outer_iterations", ln + 1),
    });
  }
  return rows;
}
