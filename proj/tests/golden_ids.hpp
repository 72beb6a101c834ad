#pragma once

// message_id values for the frozen vectors under tests/data/, pinned from an
// independent SHAKE-256 oracle over the exact committed files. Regenerate
// the files with golden_gen and re-pin if the wire format changes.

inline constexpr const char* kGoldenReqId = "f9f8ddbeb4ebbf91";
inline constexpr const char* kGoldenRespId = "e2fc866b9357873e";
