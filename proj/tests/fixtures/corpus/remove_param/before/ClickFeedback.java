package com.example.feedback;

import android.media.SoundEffects;

class ClickFeedback {
  void click(SoundEffects pool, int clickId, float volume, int priority) {
    pool.play(clickId, volume, volume, priority);
  }
}
