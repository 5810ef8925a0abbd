#include "ragkit/vector_index.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/hashing.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <unordered_set>

namespace ragkit {

namespace {

constexpr char kMagic[4] = {'R', 'K', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n, const char* field) {
        if (pos + n > buf.size())
            throw Error(ErrorKind::data, std::string("corrupt index: truncated ") + field);
    }
    std::uint32_t u32(const char* field) {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + static_cast<std::size_t>(i)])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* field) {
        need(8, field);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + static_cast<std::size_t>(i)])) << (8 * i);
        pos += 8;
        return v;
    }
    std::string bytes(std::size_t n, const char* field) {
        need(n, field);
        std::string out = buf.substr(pos, n);
        pos += n;
        return out;
    }
};

} // namespace

VectorIndex::VectorIndex(std::size_t dim, std::string provider_tag, std::uint64_t created_at)
    : dim_(dim), provider_tag_(std::move(provider_tag)), created_at_(created_at) {
    if (dim_ == 0) throw Error(ErrorKind::config, "index dimension must be positive");
}

void VectorIndex::add(std::string chunk_id, EmbeddingVector vec) {
    if (vec.dim() != dim_)
        throw Error(ErrorKind::integrity, "vector for '" + chunk_id + "' has dimension " +
                                              std::to_string(vec.dim()) + ", index expects " +
                                              std::to_string(dim_));
    if (vec.norm() == 0.0)
        throw Error(ErrorKind::data, "zero vector rejected for '" + chunk_id + "'");
    if (!ids_.insert(chunk_id).second)
        throw Error(ErrorKind::data, "duplicate chunk_id '" + chunk_id + "'");
    entries_.push_back(Entry{std::move(chunk_id), std::move(vec)});
}

std::vector<ScoredDoc> VectorIndex::search(const EmbeddingVector& query, std::size_t k) const {
    if (k == 0) throw Error(ErrorKind::data, "search requires k >= 1");
    if (query.dim() != dim_)
        throw Error(ErrorKind::integrity, "query dimension " + std::to_string(query.dim()) +
                                              " does not match index dimension " +
                                              std::to_string(dim_));
    std::vector<ScoredDoc> scored;
    scored.reserve(entries_.size());
    for (const auto& e : entries_)
        scored.push_back(ScoredDoc{e.chunk_id, cosine_similarity(query, e.vec), 0});
    std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

bool VectorIndex::operator==(const VectorIndex& other) const {
    if (dim_ != other.dim_ || provider_tag_ != other.provider_tag_ ||
        created_at_ != other.created_at_ || entries_.size() != other.entries_.size())
        return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].chunk_id != other.entries_[i].chunk_id) return false;
        const auto& a = entries_[i].vec.values;
        const auto& b = other.entries_[i].vec.values;
        if (a.size() != b.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (std::bit_cast<std::uint32_t>(a[j]) != std::bit_cast<std::uint32_t>(b[j]))
                return false;
    }
    return true;
}

void save_index(const VectorIndex& index, const std::string& path) {
    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(index.dim()));
    put_u32(buf, static_cast<std::uint32_t>(index.provider_tag().size()));
    buf.append(index.provider_tag());
    put_u64(buf, index.created_at());
    put_u64(buf, index.size());
    for (const auto& e : index.entries()) {
        put_u32(buf, static_cast<std::uint32_t>(e.chunk_id.size()));
        buf.append(e.chunk_id);
        for (float v : e.vec.values) put_u32(buf, std::bit_cast<std::uint32_t>(v));
    }
    put_u32(buf, crc32(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open index file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorKind::io, "failed writing index file: " + path);
}

VectorIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open index file: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    Reader r{buf};
    std::string magic = r.bytes(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw Error(ErrorKind::data, "corrupt index: magic bytes do not match");
    std::uint32_t version = r.u32("version");
    if (version != kVersion)
        throw Error(ErrorKind::data,
                    "corrupt index: unsupported version " + std::to_string(version));
    std::uint32_t dim = r.u32("dim");
    if (dim == 0) throw Error(ErrorKind::data, "corrupt index: dim is zero");
    std::uint32_t tag_len = r.u32("provider_tag length");
    std::string tag = r.bytes(tag_len, "provider_tag");
    std::uint64_t created_at = r.u64("created_at");
    std::uint64_t count = r.u64("entry count");

    VectorIndex index(dim, tag, created_at);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint32_t id_len = r.u32("entry id length");
        std::string id = r.bytes(id_len, "entry id");
        EmbeddingVector vec;
        vec.values.reserve(dim);
        for (std::uint32_t d = 0; d < dim; ++d)
            vec.values.push_back(std::bit_cast<float>(r.u32("entry values")));
        index.add(std::move(id), std::move(vec));
    }

    std::size_t body_end = r.pos;
    std::uint32_t stored_crc = r.u32("crc");
    if (r.pos != buf.size())
        throw Error(ErrorKind::data, "corrupt index: trailing bytes after crc");
    if (crc32(buf.data(), body_end) != stored_crc)
        throw Error(ErrorKind::data, "corrupt index: crc mismatch");
    return index;
}

std::uint64_t index_timestamp() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(epoch, &end, 10);
        if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

} // namespace ragkit
