#include "blo/bitstring.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <iterator>

#include "blo/errors.hpp"
#include "blo/rng.hpp"

namespace blo {

namespace {

constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

constexpr std::uint64_t bit_mask(std::size_t index) { return std::uint64_t{1} << (63 - index % kWordBits); }

constexpr std::uint8_t kFbinMagic[4] = {'F', 'B', 'V', '1'};

}  // namespace

BitString::BitString(std::size_t length, bool value)
    : words_(words_for(length), value ? ~std::uint64_t{0} : 0), size_(length) {
  clear_tail();
}

BitString BitString::from_text(std::string_view text) {
  BitString out;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '0' || c == '1') {
      out.push_back(c == '1');
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw MalformedInput("invalid character '" + std::string(1, c) + "' at position " + std::to_string(pos) +
                           " (expected '0', '1' or whitespace)");
    }
  }
  return out;
}

BitString BitString::unpack(std::span<const std::uint8_t> bytes, std::size_t length) {
  if (bytes.size() < (length + 7) / 8) {
    throw DimensionError("unpack: " + std::to_string(bytes.size()) + " bytes cannot hold " +
                         std::to_string(length) + " bits");
  }
  BitString out(length);
  for (std::size_t i = 0; i < (length + 7) / 8; ++i) {
    const std::size_t shift = 56 - 8 * (i % 8);
    out.words_[i / 8] |= std::uint64_t{bytes[i]} << shift;
  }
  out.clear_tail();
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t length) {
  if (length > kWordBits) throw InvalidArgument("from_uint: length exceeds 64 bits");
  BitString out(length);
  if (length > 0) out.words_[0] = value << (kWordBits - length);
  return out;
}

bool BitString::test(std::size_t index) const {
  if (index >= size_) throw DimensionError("bit index " + std::to_string(index) + " out of range");
  return (*this)[index];
}

void BitString::set(std::size_t index, bool value) {
  if (index >= size_) throw DimensionError("bit index " + std::to_string(index) + " out of range");
  if (value) {
    words_[index / kWordBits] |= bit_mask(index);
  } else {
    words_[index / kWordBits] &= ~bit_mask(index);
  }
}

void BitString::push_back(bool value) {
  if (size_ % kWordBits == 0) words_.push_back(0);
  ++size_;
  if (value) words_[(size_ - 1) / kWordBits] |= bit_mask(size_ - 1);
}

void BitString::append(const BitString& other) {
  const std::size_t offset = size_ % kWordBits;
  if (offset == 0) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    size_ += other.size_;
    return;
  }
  const std::size_t new_size = size_ + other.size_;
  words_.resize(words_for(new_size), 0);
  std::size_t dst = size_ / kWordBits;
  for (std::uint64_t w : other.words_) {
    words_[dst] |= w >> offset;
    if (dst + 1 < words_.size()) words_[dst + 1] |= w << (kWordBits - offset);
    ++dst;
  }
  size_ = new_size;
  clear_tail();
}

BitString BitString::slice(std::size_t pos, std::size_t length) const {
  if (pos > size_ || length > size_ - pos) {
    throw DimensionError("slice [" + std::to_string(pos) + ", +" + std::to_string(length) + ") exceeds length " +
                         std::to_string(size_));
  }
  BitString out(length);
  const std::size_t offset = pos % kWordBits;
  const std::size_t src = pos / kWordBits;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    std::uint64_t w = words_[src + i] << offset;
    if (offset != 0 && src + i + 1 < words_.size()) w |= words_[src + i + 1] >> (kWordBits - offset);
    out.words_[i] = w;
  }
  out.clear_tail();
  return out;
}

std::uint64_t BitString::to_uint() const {
  if (size_ > kWordBits) throw DimensionError("to_uint: more than 64 bits");
  if (size_ == 0) return 0;
  return words_[0] >> (kWordBits - size_);
}

std::string BitString::to_text() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::vector<std::uint8_t> BitString::pack() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (56 - 8 * (i % 8)));
  }
  return out;
}

std::size_t BitString::count() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitString& BitString::flip() noexcept {
  for (auto& w : words_) w = ~w;
  clear_tail();
  return *this;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size_ != size_) {
    throw DimensionError("xor of " + std::to_string(size_) + "-bit and " + std::to_string(other.size_) +
                         "-bit strings");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                                b.words_.end());
}

void BitString::clear_tail() noexcept {
  if (const std::size_t used = size_ % kWordBits; used != 0) {
    words_.back() &= ~std::uint64_t{0} << (kWordBits - used);
  }
}

BitString complement(BitString bs) { return std::move(bs.flip()); }

BitString operator^(BitString a, const BitString& b) { return std::move(a ^= b); }

BitString concat(std::span<const BitString> parts) {
  BitString out;
  for (const auto& p : parts) out.append(p);
  return out;
}

std::size_t hamming_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) {
    throw DimensionError("hamming_distance: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
  }
  std::size_t d = 0;
  const auto xw = x.words();
  const auto yw = y.words();
  for (std::size_t i = 0; i < xw.size(); ++i) d += static_cast<std::size_t>(std::popcount(xw[i] ^ yw[i]));
  return d;
}

BitString random_bits(std::size_t length, std::uint64_t seed, std::uint64_t stream) {
  if (length == 0) throw InvalidArgument("random_bits: length must be positive");
  Rng rng(seed, stream);
  BitString out;
  std::size_t remaining = length;
  while (remaining > 0) {
    const std::size_t take = std::min<std::size_t>(remaining, kWordBits);
    out.append(BitString::from_uint(rng.next() >> (kWordBits - take), take));
    remaining -= take;
  }
  return out;
}

FeatureVector::FeatureVector(BitString bits, std::string provenance)
    : data(std::move(bits)), provenance(std::move(provenance)) {
  if (data.empty()) throw InvalidArgument("feature vector must not be empty");
}

std::vector<std::uint8_t> encode_fbin(const BitString& bs) {
  if (bs.size() > 0xFFFFFFFFULL) throw InvalidArgument("fbin: bit length exceeds 32 bits");
  std::vector<std::uint8_t> out(std::begin(kFbinMagic), std::end(kFbinMagic));
  io::put_u32_be(out, static_cast<std::uint32_t>(bs.size()));
  const auto payload = bs.pack();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

BitString decode_fbin(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(std::begin(kFbinMagic), std::end(kFbinMagic), bytes.begin())) {
    throw FormatError("fbin: missing FBV1 header");
  }
  const std::uint32_t length = io::get_u32_be(bytes.subspan(4, 4));
  const auto payload = bytes.subspan(8);
  if (payload.size() != (std::size_t{length} + 7) / 8) {
    throw FormatError("fbin: payload is " + std::to_string(payload.size()) + " bytes, header declares " +
                      std::to_string(length) + " bits");
  }
  return BitString::unpack(payload, length);
}

FeatureVector read_feature_file(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  BitString bits;
  if (bytes.size() >= 4 && std::equal(std::begin(kFbinMagic), std::end(kFbinMagic), bytes.begin())) {
    bits = decode_fbin(bytes);
  } else {
    try {
      bits = BitString::from_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    } catch (const MalformedInput& e) {
      throw MalformedInput(path.string() + ": " + e.what());
    }
  }
  if (bits.empty()) throw InvalidArgument(path.string() + ": feature file holds no bits");
  return FeatureVector(std::move(bits), path.string());
}

void write_bits_file(const std::filesystem::path& path, const BitString& bs) {
  const std::string text = bs.to_text() + "\n";
  io::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_fbin_file(const std::filesystem::path& path, const BitString& bs) { io::write_file(path, encode_fbin(bs)); }

void write_feature_file(const std::filesystem::path& path, const BitString& bs) {
  if (path.extension() == ".fbin") {
    write_fbin_file(path, bs);
  } else {
    write_bits_file(path, bs);
  }
}

namespace io {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw StorageError("read failed: " + path.string());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw StorageError("write failed: " + path.string());
}

void put_u16_be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16_be(std::span<const std::uint8_t> in) {
  return static_cast<std::uint16_t>((std::uint16_t{in[0]} << 8) | in[1]);
}

std::uint32_t get_u32_be(std::span<const std::uint8_t> in) {
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) | in[3];
}

}  // namespace io

}  // namespace blo

std::size_t std::hash<blo::BitString>::operator()(const blo::BitString& bs) const noexcept {
  std::uint64_t h = blo::mix64(bs.size());
  for (std::uint64_t w : bs.words()) h = blo::mix64(h ^ w);
  return static_cast<std::size_t>(h);
}
