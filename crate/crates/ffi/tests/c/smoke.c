#include <stdio.h>
#include <string.h>

#include "lppie.h"

static const uint8_t GOLDEN[74] = {
    0x4c, 0x50, 0x50, 0x49, 0x01, 0x00, 0x00, 0x10, 0x00, 0x00, 0x40, 0x00, 0x00, 0x00, 0x01, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x55, 0x9a, 0xea, 0xd0, 0x82, 0x64, 0xd5, 0x79, 0x5d, 0x39,
    0x09, 0x71, 0x8c, 0xdd, 0x05, 0xab, 0xd4, 0x95, 0x72, 0xe8, 0x4f, 0xe5, 0x55, 0x90, 0xee, 0xf3,
    0x1a, 0x88, 0xa0, 0x8f, 0xdf, 0xfd, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x03, 0x00,
    0x00, 0x00, 0x01, 0x05, 0x00, 0x00, 0x00, 0x25, 0x06, 0x5f,
};

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);   \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const uint8_t one = 0x41;
    LppieCodec *codec = lppie_codec_new();
    CHECK(codec != NULL);

    LppieBuffer packed;
    CHECK(lppie_compress(codec, &one, 1, &packed) == LPPIE_STATUS_OK);
    CHECK(packed.len == sizeof GOLDEN);
    CHECK(memcmp(packed.data, GOLDEN, sizeof GOLDEN) == 0);

    LppieBuffer restored;
    CHECK(lppie_decompress(codec, packed.data, packed.len, &restored) == LPPIE_STATUS_OK);
    CHECK(restored.len == 1 && restored.data[0] == 0x41);

    bool matched = false;
    CHECK(lppie_verify(&one, 1, packed.data, packed.len, &matched) == LPPIE_STATUS_OK);
    CHECK(matched);

    CHECK(lppie_codec_set_chunk_digits(codec, 0) == LPPIE_STATUS_INVALID_CONFIG);
    CHECK(lppie_last_error() != NULL);

    packed.data[packed.len - 1] ^= 0x10;
    LppieBuffer broken;
    LppieStatus status = lppie_decompress(NULL, packed.data, packed.len, &broken);
    CHECK(status != LPPIE_STATUS_OK);
    printf("damaged container: status %d, %s\n", (int)status, lppie_last_error());

    lppie_buffer_free(packed);
    lppie_buffer_free(restored);
    lppie_codec_free(codec);
    printf("version %s ok\n", lppie_version());
    return 0;
}
