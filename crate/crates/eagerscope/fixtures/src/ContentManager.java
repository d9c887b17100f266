public class ContentManager {

    public ContentManager() {
    }
}
