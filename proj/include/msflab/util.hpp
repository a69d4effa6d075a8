#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace msflab {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double x);

std::vector<std::string> split(const std::string& s, char delim);

double parse_double(const std::string& s);
std::uint64_t parse_u64(const std::string& s);
std::uint32_t parse_u32(const std::string& s);

// Order-independent reduction: sums xs by recursive halving, so the result
// does not depend on how work was chunked across threads.
double pairwise_sum(std::span<const double> xs);

// Worker count honoring MSF_LAB_THREADS (0 or unset = hardware concurrency).
unsigned thread_budget();

// Runs fn(i) for i in [0, count). Results must be written to per-index slots;
// chunking is an implementation detail and never affects output.
void parallel_for(std::uint32_t count, const std::function<void(std::uint32_t)>& fn);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace msflab
