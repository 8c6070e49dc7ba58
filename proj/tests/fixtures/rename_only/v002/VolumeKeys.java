package com.example.keys;

import android.media.AudioManager;

class VolumeKeys {
  void raise(AudioManager am, int channel, int boosted, int flags) {
    am.setStreamVolume(channel, boosted, flags);
  }
}
