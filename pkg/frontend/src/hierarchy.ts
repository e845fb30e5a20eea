/**
 * The engine's built-in criteria hierarchies, mirrored so the wizard
 * can render one slider per sibling pair. Node ids and child order
 * must match the server's defaults; weights always come back from the
 * server, never from here.
 */

export interface ComparisonNode {
  id: string;
  /** Child labels in the server's order. */
  children: string[];
}

export const IMAGE_ROOT: ComparisonNode = {
  id: "image-value",
  children: ["Hourly License Price", "Popularity", "Age"],
};

export const SERVICE_ROOT: ComparisonNode = {
  id: "service-value",
  children: [
    "Hourly CPU Price",
    "Network Send Price",
    "Network Recieve Price",
    "Internet Send Price",
    "Internet Recieve Price",
    "CPU Perfomance",
    "CPU Cores",
    "RAM Perfomance",
    "RAM Size",
    "Disk Perfomance",
    "Disk Size",
    "Max. Latency",
    "Avg. Latency",
    "Uptime",
    "Service Popularity",
  ],
};

export function comparisonPairs(node: ComparisonNode): Array<[string, string]> {
  const labels = node.children;
  const pairs: Array<[string, string]> = [];
  for (let i = 0; i < labels.length; i += 1) {
    for (let j = i + 1; j < labels.length; j += 1) {
      pairs.push([labels[i]!, labels[j]!]);
    }
  }
  return pairs;
}
