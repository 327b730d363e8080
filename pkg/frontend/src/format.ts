/** Score rendering: always four decimal places, matching the API's output. */
export function formatScore(value: number): string {
  return value.toFixed(4);
}
