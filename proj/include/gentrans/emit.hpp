#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gentrans/error.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

enum class Endian { Little, Big };

// b, w, d, p, q: 1, 2, 4, 6 and 8 byte units.
enum class SizeCode { Byte, Word, Dword, Pword, Qword };

std::size_t unit_size(SizeCode code);
std::optional<SizeCode> size_code_from_letter(char letter);

struct EmitOptions {
  Endian endian = Endian::Little;
  bool strict_overflow = false;
};

// One executed line that wrote (or labelled) part of the image.
struct ListingEntry {
  std::size_t offset = 0;
  std::size_t size = 0;
  std::string source;
  SourcePos pos;
};

// Output bytes with their label table. The cursor is always the current
// length of `bytes`.
struct EmitImage {
  std::vector<std::uint8_t> bytes;
  std::map<std::string, std::int64_t> labels;
  std::set<std::string> references;  // labels used by surviving content
  std::vector<ListingEntry> listing;

  std::size_t cursor() const { return bytes.size(); }
};

// An entry of a `dX` list; nullopt stands for `?` (a zero unit).
using DataItem = std::optional<Value>;

// Writes each value as one unit, truncated to the unit size. Strings are
// only allowed with byte units and contribute their bytes.
void emit_data(EmitImage& image, SizeCode code, std::span<const DataItem> values, const EmitOptions& options,
               const SourcePos& pos = {});

// Writes `count` units, each holding `fill` (zero when absent).
void reserve_data(EmitImage& image, SizeCode code, std::int64_t count, const std::optional<Value>& fill,
                  const EmitOptions& options, const SourcePos& pos = {});

// Binds `name` to the current cursor. Redefinition is an error.
void define_label(EmitImage& image, const std::string& name, const SourcePos& pos = {});

}  // namespace gentrans
